//! JSON report written by `analyze`, `gamma`, `lambda0` and `sweep`.
//!
//! Field order is fixed by the struct definitions, so identical inputs give
//! identical bytes apart from `timestamp_unix`.

use bbtspec::gammacurve::Census;
use bbtspec::grid::Rect;
use bbtspec::spectra::{G0Candidate, Lambda0Point};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// JSON schema that every `report.json` of this version validates against.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
/// Offending limiting-set points echoed in the report; the CSV has all of them.
pub const MAX_LISTED_OFFENDERS: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub timestamp_unix: u64,
    pub config: RunConfig,
    /// Substituted placeholder value, for sweep reports.
    pub sweep_value: Option<String>,
    pub symbol: SymbolSummary,
    pub char_function: CharSummary,
    pub lambda0: Option<Lambda0Summary>,
    pub reality: Option<RealitySummary>,
    pub gamma: Option<GammaSummary>,
    pub rays: Option<RaySummary>,
    /// Whether the reality verdict and "at least k enclosing ovals" agree.
    pub agreement: Option<bool>,
    pub implicit: Option<ImplicitSummary>,
    pub g0: Option<G0Summary>,
    pub eig: Option<EigSummary>,
    pub errors: Vec<String>,
}

impl AnalysisReport {
    /// The report as JSON with the timestamp removed, for comparisons.
    pub fn without_timestamp(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timestamp_unix");
        }
        v
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolSummary {
    pub k: usize,
    /// `-min` z-exponent of the characteristic function.
    pub p: i32,
    /// `max` z-exponent of the characteristic function.
    pub q: i32,
    /// Block bandwidths: nonzero blocks `A_m` for `-r <= m <= s`.
    pub r: i32,
    pub s: i32,
    pub exact: bool,
    pub blocks: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrdDegRow {
    pub l: u32,
    pub ord: i32,
    pub deg: i32,
    pub generic_ord: i32,
    pub generic_deg: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub z: i32,
    pub lambda: u32,
    /// Exact rational as a string, or a float.
    pub coeff: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharSummary {
    pub terms: Vec<Term>,
    pub newton_polygon: Vec<(i64, i64)>,
    /// Hull equals the triangle `(-p,0), (q,0), (0,k)`.
    pub triangle: bool,
    pub ord_deg: Vec<OrdDegRow>,
    /// All `ord`/`deg` values equal their generic formulas.
    pub generic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lambda0Summary {
    pub bbox: Rect,
    pub res: usize,
    pub tau: f64,
    pub cell_diagonal: f64,
    pub points: usize,
    pub skipped: usize,
    /// Real extent of the sampled points.
    pub re_range: Option<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealitySummary {
    /// `"real"` or `"non-real"`.
    pub verdict: String,
    pub real: bool,
    pub max_abs_im: f64,
    pub offenders: usize,
    pub offenders_listed: Vec<Lambda0Point>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentSummary {
    pub index: usize,
    /// `enclosing`, `non-enclosing`, `pinched`, `non-simple` or `open-or-unreliable`.
    pub class: String,
    pub closed: bool,
    pub simple: bool,
    pub pinched: bool,
    pub unreliable: bool,
    pub winding: Option<i64>,
    pub length: f64,
    pub vertices: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaSummary {
    pub bbox: Rect,
    pub res: usize,
    pub census: Census,
    pub components: Vec<ComponentSummary>,
    pub interior_endpoints: usize,
    /// Fraction of grid nodes where the sign field is numerically zero.
    pub near_zero_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RaySummary {
    pub rays: usize,
    pub radii: (f64, f64),
    pub samples: usize,
    pub tol: f64,
    pub crossings: Vec<usize>,
    pub min_crossings: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicitSummary {
    pub degree: u32,
    pub y_power: u32,
    pub rho_power: u32,
    /// `(x exponent, y exponent, integer coefficient)`.
    pub coefficients: Vec<(u32, u32, String)>,
    /// Fraction of net-grid cells where the traced `g = 0` and the sign field disagree.
    pub disagreement: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct G0Summary {
    /// Always true: the search can miss points and report spurious ones.
    pub best_effort: bool,
    pub bbox: Rect,
    pub res: usize,
    pub candidates: Vec<G0Candidate>,
    pub skipped: usize,
    pub evaluated: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigSummary {
    pub n: usize,
    pub count: usize,
    pub max_abs_im: f64,
    /// Diagonal scaling used by the eigensolver.
    pub rho: f64,
    pub stability: f64,
}
