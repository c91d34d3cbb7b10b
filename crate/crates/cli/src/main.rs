use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use dctype::arith::ipow;
use dctype::cache::FrobeniusCache;
use dctype::conjugacy::enumerate_classes;
use dctype::dct::{self, mult_dct, mult_groups, ord_dct, ord_groups, unramified_dct, unramified_dct_n};
use dctype::elliptic::{self, tate_period, DEFAULT_MAX_Q};
use dctype::mat2::crt_split;
use dctype::oracle::{cyclic_orbit_type_with, orbit_type_with, Limits};
use dctype::zeta::{self, Options, Setting};
use dctype::{classify, CurveQ, DCType, Error, Mat2};
use num_bigint::BigUint;
use serde_json::json;

#[derive(Parser)]
#[command(name = "dctype", version, about = "Factorization types of primes in torsion fields of elliptic curves")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Machine-readable JSON output
    #[arg(long, global = true, env = "DCTYPE_JSON")]
    json: bool,
    /// Seed for randomized torsion searches
    #[arg(long, global = true, env = "DCTYPE_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "DCTYPE_THREADS")]
    threads: Option<usize>,
    /// JSONL file of per-prime Frobenius data, read and appended
    #[arg(long, global = true, env = "DCTYPE_CACHE")]
    cache: Option<PathBuf>,
    /// Accept the image and companion-form hypotheses that cannot be checked
    #[arg(long, global = true, env = "DCTYPE_ASSUME_MAXIMAL_IMAGE")]
    assume_maximal_image: bool,
    /// Largest prime for which points are counted
    #[arg(long, global = true, env = "DCTYPE_MAX_Q", default_value_t = DEFAULT_MAX_Q)]
    max_q: u64,
    /// Step budget for brute-force verification
    #[arg(long, global = true, env = "DCTYPE_VERIFY_BUDGET", default_value_t = 100_000_000)]
    verify_budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Standard type DCT(k0; a) or DCT(k0; a, b); with --k2, DCT(k0, k2; a[, b])
    StdDct {
        p: u64,
        n: u32,
        k0: u64,
        a: u32,
        b: Option<u32>,
        #[arg(long)]
        k2: Option<u64>,
    },
    /// Type of a matrix over Z/p^n
    Dct { p: u64, n: u32, matrix: String },
    /// Type of a matrix "[[a,b],[c,d]] mod N" for odd N
    DctN { matrix: String },
    /// Ramified type at a multiplicative prime
    MultDct {
        p: u64,
        n: u32,
        alpha: u64,
        #[arg(allow_hyphen_values = true)]
        eps: i8,
        b1: u32,
        b2: u32,
    },
    /// Ramified type at an ordinary prime dividing N with unit root alpha
    OrdDct { p: u64, n: u32, alpha: u64 },
    /// Conjugacy class of a matrix "[[a,b],[c,d]] mod N"
    Classify { matrix: String },
    /// Frobenius data of a curve at a prime
    Frob {
        curve: String,
        q: u64,
        /// Also give the Frobenius class modulo N
        #[arg(long, short = 'N')]
        modulus: Option<u64>,
        /// Endomorphism-ring discriminant and the integral Frobenius matrix
        #[arg(long)]
        full_delta: bool,
    },
    /// Tate parameter at a prime of multiplicative reduction
    TatePeriod {
        curve: String,
        q: u64,
        #[arg(long, default_value_t = 20)]
        precision: u32,
    },
    /// Factorization-type distribution over GL2(Z/N) as CSV type,mass,density
    Dist { n: u64 },
    /// Density of each minimal residue degree over GL2(Z/N)
    MinDegrees { n: u64 },
    /// Factorization type, minimal degree and Euler factor of one prime
    Report {
        curve: String,
        n: u64,
        q: u64,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Nonzero Dedekind zeta coefficients z_k for A <= k <= B
    Zeta {
        curve: String,
        n: u64,
        a: u64,
        b: u64,
        /// CSV "n,z_n" instead of JSON
        #[arg(long)]
        csv: bool,
    },
    /// Compare closed forms with brute-force orbit enumeration
    Verify,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) => 2,
        Error::Budget(_) | Error::SizeGuard(_) => 3,
        _ => 1,
    }
}

fn parse_matrix(text: &str, modulus: Option<u64>) -> Result<Mat2, Error> {
    match modulus {
        Some(m) if !text.contains("mod") => format!("{text} mod {m}").parse(),
        Some(m) => {
            let g: Mat2 = text.parse()?;
            if g.modulus() != m {
                return Err(Error::ModulusMismatch(g.modulus(), m));
            }
            Ok(g)
        }
        None => text.parse(),
    }
}

fn type_output(d: &DCType, json: bool) -> String {
    if json {
        json!({ "type": d.to_string(), "mass": d.mass().to_string(), "terms": d }).to_string()
    } else {
        d.to_string()
    }
}

fn require_assumption(g: &Global) -> Result<(), Error> {
    if g.assume_maximal_image {
        Ok(())
    } else {
        Err(Error::Hypothesis(
            "the maximal-image and companion-form hypotheses are not checked; pass --assume-maximal-image".into(),
        ))
    }
}

fn open_cache(g: &Global) -> Result<Option<FrobeniusCache>, Error> {
    g.cache.as_ref().map(FrobeniusCache::open).transpose()
}

fn run(cli: &Cli) -> Result<String, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::StdDct { p, n, k0, a, b, k2 } => {
            let d = match (k2, b) {
                (None, None) => dct::std_dct(*p, *n, *k0, *a)?,
                (None, Some(b)) => dct::std_dct_ab(*p, *n, *k0, *a, *b)?,
                (Some(k2), None) => dct::std_dct2(*p, *n, *k0, *k2, *a)?,
                (Some(k2), Some(b)) => dct::std_dct2_ab(*p, *n, *k0, *k2, *a, *b)?,
            };
            Ok(type_output(&d, g.json))
        }
        Command::Dct { p, n, matrix } => {
            let m = parse_matrix(matrix, Some(ipow(*p, *n)))?;
            Ok(type_output(&unramified_dct(&classify(&m)?)?, g.json))
        }
        Command::DctN { matrix } => Ok(type_output(&unramified_dct_n(&parse_matrix(matrix, None)?)?, g.json)),
        Command::MultDct { p, n, alpha, eps, b1, b2 } => {
            Ok(type_output(&mult_dct(*p, *n, *alpha, *eps, *b1, *b2)?, g.json))
        }
        Command::OrdDct { p, n, alpha } => Ok(type_output(&ord_dct(*p, *n, *alpha)?, g.json)),
        Command::Classify { matrix } => classify_cmd(&parse_matrix(matrix, None)?, g.json),
        Command::Frob { curve, q, modulus, full_delta } => frob_cmd(g, curve, *q, *modulus, *full_delta),
        Command::TatePeriod { curve, q, precision } => {
            let e = curve.parse::<CurveQ>()?.minimal_model()?;
            let tp = tate_period(&e, *q, *precision)?;
            Ok(if g.json { serde_json::to_string(&tp)? } else { tp.to_string() })
        }
        Command::Dist { n } => {
            let d = zeta::distribution(*n)?;
            Ok(if g.json { d.to_json().to_string() } else { d.to_csv().trim_end().to_string() })
        }
        Command::MinDegrees { n } => {
            let r = zeta::min_degree_report(*n)?;
            Ok(if g.json { r.to_json().to_string() } else { r.to_csv().trim_end().to_string() })
        }
        Command::Report { curve, n, q, order } => {
            require_assumption(g)?;
            let cache = open_cache(g)?;
            let s = setting(g, curve, *n, cache.as_ref())?;
            let r = s.per_prime_report(*q, *order)?;
            Ok(if g.json { serde_json::to_string(&r)? } else { r.to_string() })
        }
        Command::Zeta { curve, n, a, b, csv } => {
            require_assumption(g)?;
            let cache = open_cache(g)?;
            let s = setting(g, curve, *n, cache.as_ref())?;
            s.check_hypotheses()?;
            let step = 0.1;
            let progress = |done: usize, total: usize| {
                let tick = ((total as f64 * step) as usize).max(1);
                if total >= 10_000 && done % tick == 0 {
                    eprintln!("{done}/{total} primes");
                }
            };
            let table = s.zeta_coefficients_with_progress(*a, *b, &progress)?;
            Ok(if *csv { table.to_csv().trim_end().to_string() } else { table.to_json() })
        }
        Command::Verify => verify(g),
    }
}

fn setting<'a>(g: &Global, curve: &str, n: u64, cache: Option<&'a FrobeniusCache>) -> Result<Setting<'a>, Error> {
    let e: CurveQ = curve.parse()?;
    Setting::new(&e, n, Options { seed: g.seed, max_q: g.max_q, cache })
}

fn classify_cmd(m: &Mat2, json: bool) -> Result<String, Error> {
    let labels = crt_split(m).iter().map(classify).collect::<Result<Vec<_>, _>>()?;
    let d = unramified_dct_n(m)?;
    let size = labels.iter().map(|l| l.class_size()).product::<BigUint>();
    if json {
        let classes: Vec<_> = labels
            .iter()
            .map(|l| json!({ "class": l.to_string(), "size": l.class_size().to_string() }))
            .collect();
        return Ok(json!({ "matrix": m.to_string(), "classes": classes, "size": size.to_string(), "type": d.to_string() })
            .to_string());
    }
    let names: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    Ok(format!("class: {}\nsize: {size}\ntype: {d}", names.join(" x ")))
}

fn frob_cmd(g: &Global, curve: &str, q: u64, modulus: Option<u64>, full_delta: bool) -> Result<String, Error> {
    let e = curve.parse::<CurveQ>()?.minimal_model()?;
    if q > g.max_q {
        return Err(Error::SizeGuard(format!("q = {q} exceeds max-q {}", g.max_q)));
    }
    let reduction = e.reduction_type(q);
    let (points, a_q) = e.count_points_bounded(q, g.max_q)?;
    let mut text = vec![format!("q = {q} ({reduction})"), format!("a_q = {a_q}"), format!("#E(F_q) = {points}")];
    let mut obj = json!({ "curve": e.key(), "q": q, "reduction": reduction.to_string(), "a_q": a_q, "points": points });
    if full_delta {
        if !e.has_good_reduction(q) {
            return Err(Error::Hypothesis(format!("reduction at {q} is {reduction}")));
        }
        let d = elliptic::delta_q(&e, q, g.seed)?;
        let [a, b, c, dd] = elliptic::frobenius::duke_toth_integral(&d);
        text.push(format!("Delta_q = {}", d.disc_q));
        text.push(format!("b_q = {}", d.b_q));
        text.push(format!("delta_q = {}", d.delta));
        text.push(format!("matrix = [[{a},{b}],[{c},{dd}]]"));
        obj["delta_q"] = json!(d.disc_q);
        obj["b_q"] = json!(d.b_q);
        obj["delta"] = json!(d.delta);
        obj["matrix"] = json!([[a, b], [c, dd]]);
    }
    if let Some(n) = modulus {
        if !e.has_good_reduction(q) || n % q == 0 {
            return Err(Error::Hypothesis(format!("Frobenius at {q} is not unramified modulo {n}")));
        }
        let cache = open_cache(g)?;
        let s = Setting::new(&e, n, Options { seed: g.seed, max_q: g.max_q, cache: cache.as_ref() })?;
        let m = s.frobenius(q)?.class_matrix(n)?;
        let labels = crt_split(&m).iter().map(classify).collect::<Result<Vec<_>, _>>()?;
        let names: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        text.push(format!("class matrix = {m}"));
        text.push(format!("class = {}", names.join(" x ")));
        obj["class_matrix"] = json!(m.to_string());
        obj["classes"] = json!(names);
    }
    Ok(if g.json { obj.to_string() } else { text.join("\n") })
}

fn verify(g: &Global) -> Result<String, Error> {
    let limits = Limits { max_points: 1_000_000, max_steps: g.verify_budget };
    let mut lines = Vec::new();
    let mut mismatches = Vec::new();
    for (p, n) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)] {
        let mut count = 0;
        for label in enumerate_classes(p, n) {
            let want = cyclic_orbit_type_with(&label.representative()?, limits)?;
            let got = unramified_dct(&label)?;
            if got != want {
                mismatches.push(format!("{label}: {got} vs {want}"));
            }
            count += 1;
        }
        lines.push(format!("unramified mod {}: {count} classes", ipow(p, n)));
    }
    for (p, n) in [(3u64, 2u32), (3, 3)] {
        let m = ipow(p, n);
        let mut count = 0;
        for alpha in (1..m).filter(|a| a % p != 0) {
            for eps in [1i8, -1] {
                for b2 in 0..=n {
                    for b1 in 0..=b2 {
                        let (d, i) = mult_groups(p, n, alpha, eps, b1, b2);
                        let want = orbit_type_with(&d, &i, m, limits)?;
                        let got = mult_dct(p, n, alpha, eps, b1, b2)?;
                        if got != want {
                            mismatches.push(format!("mult {alpha} mod {m} eps {eps} b {b1},{b2}: {got} vs {want}"));
                        }
                        count += 1;
                    }
                }
            }
        }
        lines.push(format!("multiplicative mod {m}: {count} cases"));
    }
    for (p, n) in [(3u64, 2u32), (5, 2), (3, 3)] {
        let m = ipow(p, n);
        let mut count = 0;
        for alpha in (1..m).filter(|a| a % p != 0) {
            let (d, i) = ord_groups(p, n, alpha);
            let want = orbit_type_with(&d, &i, m, limits)?;
            let got = ord_dct(p, n, alpha)?;
            if got != want {
                mismatches.push(format!("ord {alpha} mod {m}: {got} vs {want}"));
            }
            count += 1;
        }
        lines.push(format!("ordinary mod {m}: {count} cases"));
    }
    if !mismatches.is_empty() {
        return Err(Error::InvalidParameter(format!("{} mismatches:\n{}", mismatches.len(), mismatches.join("\n"))));
    }
    if g.json {
        return Ok(json!({ "status": "ok", "suites": lines }).to_string());
    }
    lines.push("0 mismatches".into());
    Ok(lines.join("\n"))
}
