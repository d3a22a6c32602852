use std::time::{SystemTime, UNIX_EPOCH};

use bbtspec::gammacurve::{
    default_gamma_box, default_ray_directions, gamma_implicit, implicit_agreement, oval_census, ray_crossings,
    trace_sign_field, Component, ContourSet,
};
use bbtspec::spectra::{
    default_lambda0_box, eigenvalues, g0_scan, reality_verdict, sample_lambda0, truncation, Lambda0Sample,
};
use bbtspec::symbolkit::{
    char_function, coeff_ord_deg, newton_polygon, symbol_to_json, CharFunction, MatrixSymbol,
};
use num_complex::Complex64;
use serde_json::Value;

use crate::config::{RunConfig, MAX_EIG_DIM};
use crate::error::CliError;
use crate::report::*;

/// Ray settings shared by every command.
pub const RAYS: usize = 16;
pub const RAY_RADII: (f64, f64) = (1e-3, 1e3);
pub const RAY_SAMPLES: usize = 1024;
pub const RAY_TOL: f64 = 1e-6;
/// Above this fraction of numerically-zero nodes the net may have 2-d pieces.
pub const NEAR_ZERO_WARN: f64 = 0.05;

#[derive(Clone, Copy, Debug, Default)]
pub struct Sections {
    pub lambda0: bool,
    pub gamma: bool,
    pub implicit: bool,
    pub g0: bool,
    pub eig: bool,
}

impl Sections {
    pub fn for_config(cfg: &RunConfig) -> Sections {
        use crate::args::Command::*;
        let base = Sections { implicit: cfg.implicit, g0: cfg.g0, eig: cfg.eig, ..Default::default() };
        match cfg.command {
            Some(Gamma) => Sections { gamma: true, g0: false, eig: false, ..base },
            Some(Lambda0) => Sections { lambda0: true, implicit: false, eig: false, ..base },
            _ => Sections { lambda0: true, gamma: true, ..base },
        }
    }
}

/// Data behind the figures, kept out of the JSON report.
#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    pub lambda0: Option<Lambda0Sample>,
    pub contours: Option<ContourSet>,
    pub eigenvalues: Option<Vec<Complex64>>,
}

pub fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn summarize_symbol(symbol: &MatrixSymbol, f: &CharFunction) -> (SymbolSummary, CharSummary) {
    let k = symbol.k();
    let sym = SymbolSummary {
        k,
        p: f.p(),
        q: f.q(),
        r: symbol.r(),
        s: symbol.s(),
        exact: symbol.is_exact(),
        blocks: symbol_to_json(symbol).get("blocks").cloned().unwrap_or(Value::Null),
    };
    let terms = match f.exact() {
        Some(exact) => exact
            .terms()
            .map(|(&(z, l), c)| Term { z, lambda: l, coeff: Value::String(bbtspec::symbolkit::scalar::format_rational(c)) })
            .collect(),
        None => f.float().terms().map(|(&(z, l), c)| Term { z, lambda: l, coeff: serde_json::json!(c) }).collect(),
    };
    let poly = newton_polygon(f);
    let triangle = poly.is_triangle(f.p() as i64, f.q() as i64, k as i64);
    let ord_deg: Vec<OrdDegRow> = (0..=k as u32)
        .filter_map(|l| {
            coeff_ord_deg(f, l).ok().map(|od| OrdDegRow {
                l,
                ord: od.ord,
                deg: od.deg,
                generic_ord: od.generic_ord,
                generic_deg: od.generic_deg,
            })
        })
        .collect();
    let generic = ord_deg.len() == k + 1 && ord_deg.iter().all(|r| r.ord == r.generic_ord && r.deg == r.generic_deg);
    (sym, CharSummary { terms, newton_polygon: poly.vertices.clone(), triangle, ord_deg, generic })
}

fn component_class(c: &Component) -> &'static str {
    if !c.closed || c.unreliable {
        "open-or-unreliable"
    } else if !c.simple {
        "non-simple"
    } else if c.pinched {
        "pinched"
    } else {
        match c.winding {
            Some(0) => "non-enclosing",
            Some(_) => "enclosing",
            None => "open-or-unreliable",
        }
    }
}

/// Runs the requested sections on `symbol`. Section failures land in
/// `errors`; only an unusable symbol is an error.
pub fn analyze(
    symbol: &MatrixSymbol,
    cfg: &RunConfig,
    sections: Sections,
    sweep_value: Option<String>,
) -> Result<(AnalysisReport, Artifacts), CliError> {
    let f = char_function(symbol).map_err(|e| CliError::Input(format!("characteristic function: {e}")))?;
    let k = f.k();
    let (sym, chr) = summarize_symbol(symbol, &f);
    let mut errors = Vec::new();
    let mut art = Artifacts::default();

    let mut lambda0 = None;
    let mut reality = None;
    let mut lambda0_box = cfg.lambda0_box;
    if (sections.lambda0 || sections.g0)
        && lambda0_box.is_none() {
            lambda0_box = default_lambda0_box(&f).map_err(|e| errors.push(format!("limiting-set box: {e}"))).ok();
        }
    if sections.lambda0 {
        if let Some(b) = lambda0_box {
            match sample_lambda0(&f, b, cfg.res, cfg.tol) {
                Ok(sample) => {
                    let re_range = sample.points.iter().fold(None, |acc: Option<(f64, f64)>, p| {
                        Some(acc.map_or((p.re, p.re), |(lo, hi)| (lo.min(p.re), hi.max(p.re))))
                    });
                    lambda0 = Some(Lambda0Summary {
                        bbox: sample.bbox,
                        res: sample.res,
                        tau: sample.tau,
                        cell_diagonal: sample.cell_diagonal,
                        points: sample.points.len(),
                        skipped: sample.skipped,
                        re_range,
                    });
                    match reality_verdict(&sample) {
                        Ok(v) => {
                            reality = Some(RealitySummary {
                                verdict: if v.real { "real" } else { "non-real" }.to_string(),
                                real: v.real,
                                max_abs_im: v.max_abs_im,
                                offenders: v.offenders.len(),
                                offenders_listed: v.offenders.iter().take(MAX_LISTED_OFFENDERS).cloned().collect(),
                            })
                        }
                        Err(e) => errors.push(format!("reality verdict: {e}")),
                    }
                    art.lambda0 = Some(sample);
                }
                Err(e) => errors.push(format!("limiting set: {e}")),
            }
        }
    }

    let mut gamma = None;
    let mut rays = None;
    let mut gamma_box = cfg.gamma_box;
    if (sections.gamma || sections.implicit)
        && gamma_box.is_none() {
            gamma_box = default_gamma_box(&f, &[]).map_err(|e| errors.push(format!("net box: {e}"))).ok();
        }
    if sections.gamma {
        if let Some(b) = gamma_box {
            let (field, contours) = trace_sign_field(&f, b, cfg.gamma_res);
            if field.near_zero_fraction > NEAR_ZERO_WARN {
                errors.push(format!(
                    "net field vanishes on {:.1}% of the grid; the net may contain two-dimensional pieces",
                    100.0 * field.near_zero_fraction
                ));
            }
            if contours.interior_endpoints > 0 {
                errors.push(format!("{} traced arcs end inside the box", contours.interior_endpoints));
            }
            let components = contours
                .components
                .iter()
                .enumerate()
                .map(|(index, c)| ComponentSummary {
                    index,
                    class: component_class(c).to_string(),
                    closed: c.closed,
                    simple: c.simple,
                    pinched: c.pinched,
                    unreliable: c.unreliable,
                    winding: c.winding,
                    length: c.length,
                    vertices: c.points.len(),
                })
                .collect();
            gamma = Some(GammaSummary {
                bbox: b,
                res: cfg.gamma_res,
                census: oval_census(&contours),
                components,
                interior_endpoints: contours.interior_endpoints,
                near_zero_fraction: field.near_zero_fraction,
            });
            art.contours = Some(contours);
        }
        let mut crossings = Vec::with_capacity(RAYS);
        for d in default_ray_directions(RAYS) {
            match ray_crossings(&f, d, RAY_RADII, RAY_SAMPLES, RAY_TOL) {
                Ok(r) => crossings.push(r.count()),
                Err(e) => errors.push(format!("ray {:.4}+{:.4}i: {e}", d.re, d.im)),
            }
        }
        let min_crossings = if crossings.len() == RAYS { crossings.iter().copied().min() } else { None };
        rays = Some(RaySummary {
            rays: RAYS,
            radii: RAY_RADII,
            samples: RAY_SAMPLES,
            tol: RAY_TOL,
            crossings,
            min_crossings,
        });
    }

    let agreement = match (&reality, &gamma) {
        (Some(r), Some(g)) => Some(r.real == (g.census.enclosing >= k)),
        _ => None,
    };

    let mut implicit = None;
    if sections.implicit {
        match gamma_implicit(&f) {
            Ok(curve) => {
                let disagreement = gamma_box.map(|b| implicit_agreement(&curve, &f, b, cfg.gamma_res.min(256)));
                implicit = Some(ImplicitSummary {
                    degree: curve.degree,
                    y_power: curve.y_power,
                    rho_power: curve.rho_power,
                    coefficients: curve.coefficients().into_iter().map(|(a, b, c)| (a, b, c.to_string())).collect(),
                    disagreement: disagreement.unwrap_or(f64::NAN),
                });
            }
            Err(e) => errors.push(format!("implicit curve: {e}")),
        }
    }

    let mut g0 = None;
    if sections.g0 {
        if let Some(b) = lambda0_box {
            let scan = g0_scan(symbol, &f, b, cfg.g0_res);
            g0 = Some(G0Summary {
                best_effort: true,
                bbox: b,
                res: cfg.g0_res,
                candidates: scan.candidates,
                skipped: scan.skipped,
                evaluated: scan.evaluated,
            });
        }
    }

    let mut eig = None;
    if sections.eig {
        match eig_values(symbol, cfg.n) {
            Ok((summary, values)) => {
                eig = Some(summary);
                art.eigenvalues = Some(values);
            }
            Err(e) => errors.push(format!("eigenvalues: {e}")),
        }
    }

    let mut cfg_echo = cfg.clone();
    cfg_echo.lambda0_box = lambda0_box;
    cfg_echo.gamma_box = gamma_box;
    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        timestamp_unix: timestamp(),
        config: cfg_echo,
        sweep_value,
        symbol: sym,
        char_function: chr,
        lambda0,
        reality,
        gamma,
        rays,
        agreement,
        implicit,
        g0,
        eig,
        errors,
    };
    Ok((report, art))
}

/// Eigenvalues of `T_n(B)`, refusing matrices larger than [`MAX_EIG_DIM`].
pub fn eig_values(symbol: &MatrixSymbol, n: usize) -> Result<(EigSummary, Vec<Complex64>), CliError> {
    let dim = n.saturating_mul(symbol.k());
    if n == 0 || dim > MAX_EIG_DIM {
        return Err(CliError::Input(format!("n k = {dim} must lie in [1, {MAX_EIG_DIM}]")));
    }
    let spec = eigenvalues(&truncation(symbol, n)).map_err(|e| {
        CliError::Analysis(format!("QR iteration did not converge ({} eigenvalues found)", e.found.len()))
    })?;
    let summary =
        EigSummary { n, count: spec.values.len(), max_abs_im: spec.max_abs_im(), rho: spec.rho, stability: spec.stability };
    Ok((summary, spec.values))
}

