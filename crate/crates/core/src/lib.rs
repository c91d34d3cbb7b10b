pub mod arith;
pub mod cache;
pub mod conjugacy;
pub mod dct;
pub mod elliptic;
pub mod error;
pub mod mat2;
pub mod oracle;
pub mod padic;
pub mod zeta;

pub use conjugacy::{classify, ClassKind, ClassLabel};
pub use dct::{tensor, DCType};
pub use elliptic::CurveQ;
pub use error::{Error, Result};
pub use mat2::{Mat2, SmithForm};
pub use padic::{PValued, TruncatedPadic};
pub use zeta::{distribution, factorization_type, Options, Setting, TypeDistribution, ZetaTable};
