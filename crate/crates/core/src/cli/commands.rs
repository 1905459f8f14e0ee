//! Subcommand drivers. Each returns the process exit code.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::Prepared;
use super::{EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK};
use crate::complexifier::{PhasePoint, Tau};
use crate::cst::{build_unitarizer, cst, semigroup_defect, PeterWeylSection};
use crate::error::{Error, Result};
use crate::frames::GeometryRow;
use crate::group::IrrepLabel;
use crate::linalg::CMatrix;
use crate::measure::{norm_a, NormEntry, NormTable};

pub const GEOMETRY_HEADER: &str = "point_id,tau,type11_residual,min_eigenvalue,theta_residual,halfform_closed,halfform_det";
pub const SEMIGROUP_HEADER: &str = "rho,tau2,tau2p,defect,err_bound";
pub const LIMIT_HEADER: &str = "rho,tau2,value,err,deviation,bound";

fn complex_field(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// Writes `content` to `path` through a temporary sibling and a rename, or
/// to stdout when no path is configured.
pub fn write_atomic(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            std::fs::write(&tmp, content)?;
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
    }
}

pub fn geometry_check(p: &Prepared) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.config.seed);
    let points: Vec<PhasePoint> =
        (0..p.config.samples).map(|_| PhasePoint::random(&p.model, &mut rng, p.config.sample_half_width)).collect();
    let jobs: Vec<(usize, Tau)> =
        (0..points.len()).flat_map(|i| p.config.taus.iter().map(move |&t| (i, t))).collect();
    let rows: Vec<(usize, Tau, Result<GeometryRow>)> = jobs
        .par_iter()
        .map(|&(i, tau)| (i, tau, GeometryRow::compute(&p.model, &p.complexifier, &points[i], tau)))
        .collect();

    let mut out = String::from(GEOMETRY_HEADER);
    out.push('\n');
    let mut first_failure = None;
    for (i, tau, row) in rows {
        match row {
            Ok(r) => {
                writeln!(
                    out,
                    "{i},{tau},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                    r.type11_residual,
                    r.min_eigenvalue,
                    r.theta_residual,
                    r.halfform_closed,
                    complex_field(r.halfform_det)
                )
                .expect("write to string");
                if first_failure.is_none() && !r.passes() {
                    first_failure = Some(format!(
                        "point {i} at tau {tau}: duality {:.3e}, type11 {:.3e}, min eigenvalue {:.3e}, \
                         positivity closed form {:.3e}, theta {:.3e}, half-form {:.3e}",
                        r.duality_residual,
                        r.type11_residual,
                        r.min_eigenvalue,
                        r.positivity_closed_form_residual,
                        r.theta_residual,
                        r.halfform_discrepancy()
                    ));
                }
            }
            Err(e) => {
                if first_failure.is_none() {
                    first_failure = Some(format!("point {i} at tau {tau}: {e}"));
                }
            }
        }
    }
    write_atomic(p.resolve(&p.config.outputs.geometry).as_deref(), &out)?;
    match first_failure {
        None => Ok(EXIT_OK),
        Some(msg) => {
            eprintln!("geometry-check failed: {msg}");
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

/// Norm table loaded from the cache, plus the rows of other tables sharing
/// the cache file.
struct CachedTable {
    table: NormTable,
    foreign: Vec<String>,
}

fn load_cache(p: &Prepared) -> Result<CachedTable> {
    if let Some(path) = p.resolve(&p.config.outputs.cache) {
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let (table, foreign) = NormTable::from_csv(&text, &p.model, &p.complexifier)?;
            return Ok(CachedTable { table, foreign });
        }
    }
    Ok(CachedTable { table: NormTable::new(&p.model, &p.complexifier), foreign: Vec::new() })
}

fn save_cache(p: &Prepared, cached: &CachedTable) -> Result<()> {
    let Some(path) = p.resolve(&p.config.outputs.cache) else {
        return Ok(());
    };
    let mut text = cached.table.to_csv();
    for line in &cached.foreign {
        text.push_str(line);
        text.push('\n');
    }
    write_atomic(Some(&path), &text)
}

/// Computes the requested entries missing from the table. Failures are
/// reported per row and leave the row absent.
fn fill(p: &Prepared, table: &mut NormTable, requests: &[(IrrepLabel, f64)]) -> usize {
    let mut seen = BTreeMap::new();
    for (rho, t) in requests {
        if table.get(rho, *t).is_none() {
            seen.insert((rho.clone(), t.to_bits()), ());
        }
    }
    let missing: Vec<(IrrepLabel, f64)> = seen.into_keys().map(|(rho, bits)| (rho, f64::from_bits(bits))).collect();
    let results: Vec<Result<NormEntry>> = missing
        .par_iter()
        .map(|(rho, t)| {
            norm_a(&p.model, &p.complexifier, rho, *t, &p.config.quadrature).map(|e| NormEntry { a: e.a, err: e.err })
        })
        .collect();
    let mut failures = 0;
    for ((rho, t), r) in missing.into_iter().zip(results) {
        match r {
            Ok(e) => table.insert(rho, t, e),
            Err(e) => {
                eprintln!("norm for rho={rho} tau2={t:.16e} failed: {e}");
                failures += 1;
            }
        }
    }
    failures
}

fn norm_requests(irreps: &[IrrepLabel], tau2s: &[f64]) -> Vec<(IrrepLabel, f64)> {
    irreps
        .iter()
        .flat_map(|rho| std::iter::once(0.0).chain(tau2s.iter().copied()).map(move |t| (rho.clone(), t)))
        .collect()
}

pub fn norms(p: &Prepared) -> Result<i32> {
    let mut cached = load_cache(p)?;
    let requests = norm_requests(&p.irreps, &p.tau2s);
    let failures = fill(p, &mut cached.table, &requests);
    save_cache(p, &cached)?;

    let mut out = NormTable::new(&p.model, &p.complexifier);
    for (rho, t) in requests {
        if let Some(e) = cached.table.get(&rho, t) {
            out.insert(rho, t, e);
        }
    }
    write_atomic(p.resolve(&p.config.outputs.norms).as_deref(), &out.to_csv())?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parses a section file: a JSON list of `{"rho": label, "matrix": [[re, im], ...]}`
/// with row-major `d × d` blocks.
pub fn parse_section(p: &Prepared, text: &str) -> Result<PeterWeylSection> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::MalformedSection(e.to_string()))?;
    let items = value.as_array().ok_or_else(|| Error::MalformedSection("expected a JSON list".into()))?;
    let mut entries = BTreeMap::new();
    for item in items {
        let obj = item.as_object().ok_or_else(|| Error::MalformedSection(format!("expected an object, got {item}")))?;
        if obj.keys().any(|k| k != "rho" && k != "matrix") {
            return Err(Error::MalformedSection(format!("unexpected keys in {item}")));
        }
        let rho = p.model.irrep_from_json(obj.get("rho").ok_or_else(|| Error::MalformedSection("missing rho".into()))?)?;
        if !p.irreps.contains(&rho) {
            return Err(Error::UnknownIrrep(format!("{rho} is outside the configured catalog")));
        }
        let d = rho.dim();
        let raw = obj
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::MalformedSection(format!("missing matrix for {rho}")))?;
        if raw.len() != d * d {
            return Err(Error::MalformedSection(format!("block for {rho} has {} entries, expected {}", raw.len(), d * d)));
        }
        let mut values = Vec::with_capacity(d * d);
        for z in raw {
            let pair = z.as_array().filter(|a| a.len() == 2);
            let parts = pair.and_then(|a| Some((a[0].as_f64()?, a[1].as_f64()?)));
            let (re, im) = parts.ok_or_else(|| Error::MalformedSection(format!("bad entry {z} for {rho}")))?;
            values.push(Complex64::new(re, im));
        }
        if entries.insert(rho.clone(), CMatrix::from_row_slice(d, d, &values)).is_some() {
            return Err(Error::MalformedSection(format!("duplicate block for {rho}")));
        }
    }
    PeterWeylSection::from_entries(&p.model, entries, Tau::zero())
}

pub fn section_json(s: &PeterWeylSection) -> Value {
    let blocks: Vec<Value> = s
        .entries
        .iter()
        .map(|(rho, m)| {
            let mut flat = Vec::with_capacity(m.len());
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    flat.push(json!([m[(i, j)].re, m[(i, j)].im]));
                }
            }
            json!({"rho": rho.to_json(), "matrix": flat})
        })
        .collect();
    Value::Array(blocks)
}

pub fn transform(p: &Prepared, section_path: Option<&Path>, tau: Option<Tau>) -> Result<i32> {
    let Some(section_path) = section_path else {
        eprintln!("transform needs --section");
        return Ok(EXIT_CONFIG);
    };
    let tau = tau.unwrap_or(p.config.taus[0]);
    if tau.tau2 <= 0.0 {
        return Err(Error::InvalidConfig(format!("transform needs tau2 > 0, got {}", tau.tau2)));
    }
    let text = std::fs::read_to_string(section_path).map_err(|e| Error::MalformedSection(e.to_string()))?;
    let section = parse_section(p, &text)?;
    let irreps: Vec<IrrepLabel> = section.entries.keys().cloned().collect();

    let mut cached = load_cache(p)?;
    let failures = fill(p, &mut cached.table, &norm_requests(&irreps, &[tau.tau2]));
    save_cache(p, &cached)?;
    if failures > 0 {
        return Ok(EXIT_CHECK_FAILED);
    }
    let table = &cached.table;
    let e = build_unitarizer(table, &irreps, tau.tau2)?;
    let out = cst(&section, tau, &e)?;
    let doc = json!({
        "tau": {"tau1": tau.tau1, "tau2": tau.tau2},
        "input_norm": section.norm(table)?,
        "output_norm": out.norm(table)?,
        "section": section_json(&out),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json serializes");
    text.push('\n');
    write_atomic(p.resolve(&p.config.outputs.transform).as_deref(), &text)?;
    Ok(EXIT_OK)
}

pub fn semigroup_scan(p: &Prepared) -> Result<i32> {
    let pairs: Vec<(f64, f64)> = p.tau2s.iter().flat_map(|&a| p.tau2s.iter().map(move |&b| (a, b))).collect();
    let mut needed: Vec<f64> = p.tau2s.clone();
    needed.extend(pairs.iter().map(|(a, b)| a + b));
    let mut cached = load_cache(p)?;
    let mut failures = fill(p, &mut cached.table, &norm_requests(&p.irreps, &needed));
    save_cache(p, &cached)?;

    let mut out = String::from(SEMIGROUP_HEADER);
    out.push('\n');
    for rho in &p.irreps {
        for &(a, b) in &pairs {
            match semigroup_defect(&cached.table, rho, a, b) {
                Ok(d) => writeln!(out, "{rho},{a:.16e},{b:.16e},{:.16e},{:.16e}", d.defect, d.err_bound)
                    .expect("write to string"),
                Err(e) => {
                    eprintln!("semigroup row rho={rho} tau2={a:.16e} tau2p={b:.16e} skipped: {e}");
                    failures += 1;
                }
            }
        }
    }
    write_atomic(p.resolve(&p.config.outputs.semigroup).as_deref(), &out)?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn limit_scan(p: &Prepared) -> Result<i32> {
    let mut cached = load_cache(p)?;
    let failures = fill(p, &mut cached.table, &norm_requests(&p.irreps, &p.tau2s));
    save_cache(p, &cached)?;

    let mut out = String::from(LIMIT_HEADER);
    out.push('\n');
    for rho in &p.irreps {
        let sqrt_d = (rho.dim() as f64).sqrt();
        for &t in &p.tau2s {
            if let Some(e) = cached.table.get(rho, t) {
                let value = sqrt_d * e.a;
                writeln!(out, "{rho},{t:.16e},{value:.16e},{:.16e},{:.16e},{:.16e}", e.err, (value - 1.0).abs(), 5.0 * t)
                    .expect("write to string");
            }
        }
    }
    write_atomic(p.resolve(&p.config.outputs.limit).as_deref(), &out)?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}
