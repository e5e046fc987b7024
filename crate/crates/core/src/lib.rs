//! Dihedral quotients of knot groups, linking forms on the double branched
//! cover, characteristic knots, and the Ξₙ ribbon obstruction.

pub mod cover;
pub mod linalg;
pub mod modulus;
pub mod obstruction;
pub mod parse;
pub mod report;
pub mod scan;
pub mod seifert;
pub mod selftest;
pub mod signature;

pub use cover::{GroupElement, LinkingForm, TorsionGroup};
pub use linalg::{IntMatrix, LinalgError, ResidueQZ};
pub use modulus::ModulusError;
pub use seifert::{SeifertError, SeifertMatrix, SurfaceClass};
pub use obstruction::{CharKnotClass, Character, ExtensionVerdict, ObstructionError, QuotientClass, ScopeNote};
pub use parse::{parse_matrix, parse_vector, render, ParseError};
pub use report::{analyze, AnalyzeOptions, KnotRecord, Report, XiOptions};
pub use scan::{scan_path, scan_text, ScanError, ScanRow};
pub use signature::{Precision, RibbonVerdict, RootOfUnity, SigmaW, SignatureError, XiValue};
