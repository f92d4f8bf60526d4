//! One function per subcommand; each returns a complete record.

use fueterlab_core::contour::ord_euclidean;
use fueterlab_core::gauge::{chern_number_residues, chern_number_volume, field_strength, Box4};
use fueterlab_core::kernels::FueterField;
use fueterlab_core::manifolds::{ord_cylinder, ord_hopf, CotangentKind, CotangentSeries, HopfConfig, HopfKernel, HopfKind, SeriesDiagnostics};
use fueterlab_core::{Error, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Geometry, RunConfig};
use crate::error::{config_err, CliResult};
use crate::fields::{quat, FieldSpec, KernelKind};
use crate::record::{ResultRecord, Status};

fn scan_points(config: &RunConfig) -> Vec<Quaternion> {
    let scan = &config.scan;
    if !scan.points.is_empty() {
        return scan.points.iter().map(|&p| quat(p)).collect();
    }
    let (a, b) = (quat(scan.from), quat(scan.to));
    let n = scan.samples;
    (0..n)
        .map(|i| {
            let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            a + (b - a) * t
        })
        .collect()
}

/// Truncation diagnostics for the series-valued fields.
fn series_diagnostics(spec: &FieldSpec, z: Quaternion) -> Option<fueterlab_core::Result<SeriesDiagnostics>> {
    match spec {
        FieldSpec::Cotangent { p, truncation_k, kind } => {
            let kind = match kind {
                KernelKind::D => CotangentKind::D,
                KernelKind::Ddelta => CotangentKind::DDelta,
            };
            Some(CotangentSeries::standard(*p, *truncation_k).and_then(|s| s.diagnostics(kind, z)))
        }
        FieldSpec::Hopf { m, truncation_k, y, kind } => {
            let kind = if *kind == KernelKind::D { HopfKind::D } else { HopfKind::DDelta };
            Some(HopfKernel::new(HopfConfig { m: *m, truncation: *truncation_k }, quat(*y), kind).and_then(|h| h.diagnostics(z)))
        }
        _ => None,
    }
}

fn q4(q: Quaternion) -> [f64; 4] {
    q.to_array()
}

/// Evaluates the configured field on a point list or line scan.
pub fn cmd_kernel(config: &RunConfig) -> CliResult<ResultRecord> {
    let field = config.field.build()?;
    let points = scan_points(config);
    let rows: Vec<serde_json::Value> = points
        .par_iter()
        .enumerate()
        .map(|(i, &z)| {
            let mut row = json!({
                "index": i,
                "x0": z.x0, "x1": z.x1, "x2": z.x2, "x3": z.x3,
                "v0": null, "v1": null, "v2": null, "v3": null, "abs": null,
                "convergence": null,
                "flag": "",
            });
            match field.eval(z) {
                Ok(v) => {
                    for (k, c) in ["v0", "v1", "v2", "v3"].iter().zip(v.to_array()) {
                        row[*k] = json!(c);
                    }
                    row["abs"] = json!(v.norm());
                    match series_diagnostics(&config.field, z) {
                        Some(Ok(d)) => row["convergence"] = json!(d.relative_increment),
                        Some(Err(e)) => row["flag"] = json!(e.to_string()),
                        None => {}
                    }
                }
                Err(e) => row["flag"] = json!(e.to_string()),
            }
            row
        })
        .collect();
    let warnings: Vec<String> = rows
        .iter()
        .filter(|r| r["flag"] != "")
        .map(|r| format!("row {}: {}", r["index"], r["flag"].as_str().unwrap_or_default()))
        .collect();
    let status = if warnings.is_empty() { Status::Ok } else { Status::Warn };
    let outputs = json!({ "rows": rows, "warning_count": warnings.len() });
    Ok(ResultRecord::new(config, status, outputs, warnings))
}

/// Uniform points in the cube `[-r, r]⁴` at least `min_distance` from the singular set.
pub fn sample_regular_points(field: &FueterField, n: usize, r: f64, min_distance: f64, rng: &mut ChaCha8Rng) -> CliResult<Vec<Quaternion>> {
    let mut out = Vec::with_capacity(n);
    let mut tries = 0usize;
    while out.len() < n {
        tries += 1;
        if tries > 1000 * n {
            return Err(config_err("could not draw regular sample points; lower min_distance"));
        }
        let z = Quaternion::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r));
        if field.singular_distance(z) >= min_distance {
            out.push(z);
        }
    }
    Ok(out)
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Anti-self-dual defect of the potential built from the configured field.
pub fn cmd_selfdual(config: &RunConfig) -> CliResult<ResultRecord> {
    let field = config.field.build()?;
    let sd = &config.selfdual;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points = sample_regular_points(&field, sd.samples, sd.radius, sd.min_distance, &mut rng)?;
    let results: Vec<Result<f64, Error>> = points
        .par_iter()
        .map(|&z| field_strength(&field, z, config.grid.step).map(|s| s.asd_defect()))
        .collect();
    let mut defects = Vec::new();
    let mut warnings = Vec::new();
    for (z, r) in points.iter().zip(results) {
        match r {
            Ok(d) => defects.push(d),
            Err(e) => warnings.push(format!("{z:?}: {e}")),
        }
    }
    if defects.is_empty() {
        return Err(Error::DegenerateDF(0.0).into());
    }
    let max = defects.iter().copied().fold(0.0, f64::max);
    let mean = defects.iter().sum::<f64>() / defects.len() as f64;
    let med = median(&mut defects.clone());
    let status = if max < sd.tolerance { Status::Pass } else { Status::Fail };
    let outputs = json!({
        "samples": defects.len(),
        "max_defect": max,
        "median_defect": med,
        "mean_defect": mean,
        "tolerance": sd.tolerance,
        "skipped": warnings.len(),
    });
    Ok(ResultRecord::new(config, status, outputs, warnings))
}

/// Second Chern number of a pole configuration by every route.
pub fn cmd_chern(config: &RunConfig) -> CliResult<ResultRecord> {
    let poles = config.field.pole_sum()?;
    let mut report = chern_number_residues(&poles, config.chern.epsilon, config.contour.resolution())?;
    if config.chern.volume {
        let field = FueterField::poles(poles);
        let b = Box4::cube(config.grid.box_half);
        report.c2_volume = Some(chern_number_volume(&field, b, config.grid.nodes, config.grid.step)?);
    }
    let outputs = serde_json::to_value(&report).expect("report serializes");
    Ok(ResultRecord::new(config, Status::Ok, outputs, Vec::new()))
}

/// Pattern search on `|f|`: coordinate steps are accepted while they
/// decrease `|f|`, otherwise the step is halved.
pub fn locate_zero(f: &(dyn Fn(Quaternion) -> fueterlab_core::Result<Quaternion> + Sync), start: Quaternion) -> CliResult<Quaternion> {
    let mut z = start;
    let mut fz = f(z)?.norm();
    let mut step = 0.5;
    let mut iterations = 0;
    while fz > 1e-13 && step > 1e-15 {
        iterations += 1;
        if iterations > 100_000 {
            break;
        }
        let mut best = (fz, z);
        for mu in 0..4 {
            for s in [step, -step] {
                let w = z + Quaternion::basis(mu) * s;
                if let Ok(v) = f(w) {
                    if v.norm() < best.0 {
                        best = (v.norm(), w);
                    }
                }
            }
        }
        if best.0 < fz {
            (fz, z) = best;
        } else {
            step *= 0.5;
        }
    }
    Ok(z)
}

/// Order of a zero (or, on the Hopf manifold, multiplicity of a value).
pub fn cmd_ord(config: &RunConfig) -> CliResult<ResultRecord> {
    let o = &config.ord;
    let field = o.map.build()?;
    let f = |z: Quaternion| field.eval(z);
    let res = config.contour.resolution();
    let eps = config.contour.epsilon;
    let geometry = serde_json::to_value(o.geometry).expect("geometry");
    let outputs = match o.geometry {
        Geometry::Euclidean | Geometry::Cylinder => {
            let c = match o.zero {
                Some(c) => quat(c),
                None => locate_zero(&f, quat(o.start))?,
            };
            let est = if o.geometry == Geometry::Euclidean {
                ord_euclidean(&f, c, eps, res)?
            } else {
                let series = CotangentSeries::standard(o.p, o.truncation_k)?;
                ord_cylinder(&f, c, eps, &series, res)?
            };
            json!({ "geometry": geometry, "point": q4(c), "ord": est.value, "gap": est.gap, "rounded": est.rounded() })
        }
        Geometry::Hopf => {
            let c = quat(o.zero.unwrap_or(o.start));
            if c.norm() == 0.0 {
                return Err(config_err("the Hopf manifold excludes the origin"));
            }
            let r = ord_hopf(&f, c, eps, HopfConfig { m: o.m, truncation: o.truncation_k }, res)?;
            json!({
                "geometry": geometry,
                "point": q4(c),
                "target": q4(r.target),
                "ord": r.pullback.value,
                "gap": r.pullback.gap,
                "rounded": r.pullback.rounded(),
                "image_cycle": r.image_cycle.value,
                "route_difference": (r.pullback.value - r.image_cycle.value).abs(),
            })
        }
    };
    Ok(ResultRecord::new(config, Status::Ok, outputs, Vec::new()))
}
