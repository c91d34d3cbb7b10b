use dctype::conjugacy::enumerate_classes;
use dctype::dct::{mult_dct, mult_groups, ord_dct, ord_groups, unramified_dct};
use dctype::oracle::{cyclic_orbit_type, lambda_profile, lambda_type, orbit_type};
use dctype::arith::ipow;

fn unramified_mismatches(p: u64, n: u32) -> Vec<String> {
    let mut bad = Vec::new();
    for label in enumerate_classes(p, n) {
        let g = label.representative().unwrap();
        let expect = cyclic_orbit_type(&g).unwrap();
        match unramified_dct(&label) {
            Ok(got) if got == expect => {}
            Ok(got) => bad.push(format!("{label}: formula {got}, orbits {expect}")),
            Err(e) => bad.push(format!("{label}: {e}, orbits {expect}")),
        }
    }
    bad
}

#[test]
fn unramified_formula_matches_orbits() {
    let mut bad = Vec::new();
    for (p, n) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)] {
        bad.extend(unramified_mismatches(p, n));
    }
    assert!(bad.is_empty(), "{} mismatches:\n{}", bad.len(), bad.join("\n"));
}

#[test]
fn mult_formula_matches_orbits() {
    let mut bad = Vec::new();
    for (p, n) in [(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)] {
        let m = ipow(p, n);
        for alpha in (1..m).filter(|a| a % p != 0) {
            for eps in [1i8, -1] {
                for b2 in 0..=n {
                    for b1 in 0..=b2 {
                        let (d, i) = mult_groups(p, n, alpha, eps, b1, b2);
                        let expect = orbit_type(&d, &i, m).unwrap();
                        match mult_dct(p, n, alpha, eps, b1, b2) {
                            Ok(got) if got == expect => {}
                            Ok(got) => bad.push(format!("{alpha} mod {m}, eps {eps}, b1 {b1}, b2 {b2}: {got} vs {expect}")),
                            Err(e) => bad.push(format!("{alpha} mod {m}, eps {eps}, b1 {b1}, b2 {b2}: {e} vs {expect}")),
                        }
                    }
                }
            }
        }
    }
    assert!(bad.is_empty(), "{} mismatches:\n{}", bad.len(), bad.join("\n"));
}

#[test]
fn ord_formula_matches_orbits() {
    let mut bad = Vec::new();
    for (p, n) in [(3u64, 2u32), (5, 2), (3, 3), (5, 1), (7, 1)] {
        let m = ipow(p, n);
        for alpha in (1..m).filter(|a| a % p != 0) {
            let (d, i) = ord_groups(p, n, alpha);
            let expect = orbit_type(&d, &i, m).unwrap();
            match ord_dct(p, n, alpha) {
                Ok(got) if got == expect => {}
                Ok(got) => bad.push(format!("{alpha} mod {m}: {got} vs {expect}")),
                Err(e) => bad.push(format!("{alpha} mod {m}: {e} vs {expect}")),
            }
        }
    }
    assert!(bad.is_empty(), "{} mismatches:\n{}", bad.len(), bad.join("\n"));
}

#[test]
fn lambda_profile_matches_orbits() {
    for (p, n) in [(3, 2), (5, 1), (7, 1)] {
        for label in enumerate_classes(p, n) {
            let g = label.representative().unwrap();
            let prof = lambda_profile(&g).unwrap();
            assert_eq!(lambda_type(&prof).unwrap(), cyclic_orbit_type(&g).unwrap(), "{label}");
        }
    }
}
