use std::path::Path;
use std::time::Instant;

use liedegen_core::catalog::{self, certificate_report};
use liedegen_core::deform::{self, build_mu_d, is_valid_deformation, theorem1_pipeline};
use liedegen_core::degen::{certify_degeneration, limit_at_zero, verify_witness, DegenerationCertificate, WitnessSource};
use liedegen_core::linalg::format_vector;
use liedegen_core::{Error, LieAlgebra, LinearMap, Result, Scalar, SeriesKind, Subspace, Symbols, WitnessFamily};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{Command, IdealArgs, Kind};

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Jacobi { .. } => "jacobi",
        Command::Series { .. } => "series",
        Command::Derivations { .. } => "derivations",
        Command::Grading { .. } => "grading",
        Command::Cocycle(_) => "cocycle",
        Command::Deform { .. } => "deform",
        Command::Witness { .. } => "witness",
        Command::Limit { .. } => "limit",
        Command::Pipeline { .. } => "pipeline",
        Command::VerifyFixtures => "verify-paper",
        Command::Attach { .. } => "attach",
        Command::Export { .. } => "export",
    }
}

pub fn run(cmd: &Command) -> Result<Report> {
    let mut r = Report::new(name(cmd));
    match cmd {
        Command::Jacobi { alg } => jacobi(&mut r, &catalog::load_algebra(alg)?),
        Command::Series { alg, kind } => series(&mut r, &catalog::load_algebra(alg)?, *kind),
        Command::Derivations { alg, diagonal } => derivations(&mut r, &catalog::load_algebra(alg)?, *diagonal),
        Command::Grading { alg, derivation } => {
            let mu = catalog::load_algebra(alg)?;
            let d = load_map(derivation, mu.symbols())?;
            grading(&mut r, &mu, &d)
        }
        Command::Cocycle(args) => cocycle(&mut r, args),
        Command::Deform { args, output } => deform_cmd(&mut r, args, output.as_deref()),
        Command::Witness { mu1, curve, g, reparametrization } => witness(&mut r, mu1, curve, g, *reparametrization),
        Command::Limit { curve } => limit(&mut r, &catalog::load_algebra(curve)?),
        Command::Pipeline { alg, derivation, ideal, complement, witness, reparametrization } => {
            pipeline(&mut r, alg, derivation, ideal.as_deref(), *complement, witness.as_deref(), *reparametrization)
        }
        Command::VerifyFixtures => verify_fixtures(&mut r),
        Command::Attach { fixture, alg, replace } => attach(&mut r, fixture, alg, *replace),
        Command::Export { name, output } => export(&mut r, name, output),
    }?;
    Ok(r)
}

fn load_map(path: &Path, symbols: &Symbols) -> Result<LinearMap> {
    Ok(catalog::load_map(path, Some(symbols))?.0)
}

fn jacobi(r: &mut Report, mu: &LieAlgebra) -> Result<()> {
    let residuals = mu.jacobi_residuals();
    let total = mu.num_triples();
    let verdict = if residuals.is_empty() { "yes" } else { "no" };
    r.line(format!("Lie algebra: {verdict} ({} residuals over {total} triples)", residuals.len()));
    let mut listed = Vec::new();
    for res in &residuals {
        let (i, j, k) = res.triple;
        let value = format_vector(&res.residual, mu.symbols());
        r.line(format!("  J(e{}, e{}, e{}) = {value}", i + 1, j + 1, k + 1));
        listed.push(json!({ "triple": [i + 1, j + 1, k + 1], "value": value }));
    }
    r.set("algebra", json!(mu.name));
    r.set("is_lie", json!(residuals.is_empty()));
    r.set("triples", json!(total));
    r.set("residuals", Value::Array(listed));
    if !residuals.is_empty() {
        r.fail();
    }
    Ok(())
}

fn series(r: &mut Report, mu: &LieAlgebra, kind: Kind) -> Result<()> {
    let (kind, label, prefix) = match kind {
        Kind::LowerCentral => (SeriesKind::LowerCentral, "lower central", "C"),
        Kind::Derived => (SeriesKind::Derived, "derived", "D"),
    };
    let terms = mu.series(kind);
    let dims: Vec<String> = terms.iter().map(|s| s.dim().to_string()).collect();
    let reaches_zero = terms.last().is_some_and(Subspace::is_zero);
    r.line(format!("{label} series dimensions: {}", dims.join(" > ")));
    for (k, s) in terms.iter().enumerate() {
        r.line(format!("  {prefix}{k} = {}", s.format(mu.symbols())));
    }
    let property = if kind == SeriesKind::LowerCentral { "nilpotent" } else { "solvable" };
    r.line(format!("{property}: {}", if reaches_zero { "yes" } else { "no" }));
    r.set("algebra", json!(mu.name));
    r.set("kind", json!(label));
    r.set("dims", json!(terms.iter().map(Subspace::dim).collect::<Vec<_>>()));
    r.set("terms", json!(terms.iter().map(|s| s.format(mu.symbols())).collect::<Vec<_>>()));
    r.set(property, json!(reaches_zero));
    Ok(())
}

fn map_json(m: &LinearMap, symbols: &Symbols) -> Value {
    serde_json::from_str(&catalog::map_to_json(m, symbols)).expect("canonical map json")
}

fn derivations(r: &mut Report, mu: &LieAlgebra, diagonal: bool) -> Result<()> {
    let syms = mu.symbols();
    r.set("algebra", json!(mu.name));
    if diagonal {
        let basis = mu.diagonal_derivations();
        r.line(format!("diagonal derivations: dimension {}", basis.len()));
        let rows: Vec<Vec<String>> = basis.iter().map(|v| v.iter().map(|c| c.format(syms)).collect()).collect();
        for row in &rows {
            r.line(format!("  diag({})", row.join(", ")));
        }
        r.set("dimension", json!(basis.len()));
        r.set("diagonal", json!(rows));
        return Ok(());
    }
    let basis = mu.derivation_space();
    r.line(format!("derivation algebra: dimension {}", basis.len()));
    for (k, d) in basis.iter().enumerate() {
        r.line(format!("  D{}:", k + 1));
        for l in d.format(syms).lines() {
            r.line(format!("    {l}"));
        }
    }
    r.set("dimension", json!(basis.len()));
    r.set("basis", Value::Array(basis.iter().map(|d| map_json(d, syms)).collect()));
    Ok(())
}

fn grading(r: &mut Report, mu: &LieAlgebra, d: &LinearMap) -> Result<()> {
    let g = mu.eigen_grading(d)?;
    mu.check_grading(&g)?;
    r.line(format!("grading of {} by eigenvalues of D:", mu.name));
    let mut pieces = Vec::new();
    for (w, s) in g.pieces() {
        r.line(format!("  weight {w}: {}", s.format(mu.symbols())));
        pieces.push(json!({ "weight": w.to_string(), "space": s.format(mu.symbols()), "dim": s.dim() }));
    }
    r.set("algebra", json!(mu.name));
    r.set("pieces", Value::Array(pieces));
    Ok(())
}

/// Codimension-1 ideal data `(X, h, D|h)` from command-line flags.
fn ideal_data(mu: &LieAlgebra, ideal: &[usize], complement: Option<usize>, d: LinearMap) -> Result<(Vec<Scalar>, Subspace, LinearMap)> {
    let n = mu.dim();
    let mut idx: Vec<usize> = Vec::with_capacity(ideal.len());
    for &i in ideal {
        if i == 0 || i > n {
            return Err(Error::Invalid(format!("ideal index {i} outside 1..{n}")));
        }
        if idx.contains(&(i - 1)) {
            return Err(Error::Invalid(format!("ideal index {i} repeated")));
        }
        idx.push(i - 1);
    }
    idx.sort_unstable();
    if idx.len() + 1 != n {
        return Err(Error::Invalid(format!("ideal has dimension {}, expected {}", idx.len(), n - 1)));
    }
    let x_index = match complement {
        Some(k) if k == 0 || k > n => return Err(Error::Invalid(format!("complement index {k} outside 1..{n}"))),
        Some(k) if idx.contains(&(k - 1)) => return Err(Error::Invalid(format!("complement e{k} lies in the ideal"))),
        Some(k) => k - 1,
        None => (0..n).find(|i| !idx.contains(i)).expect("codimension 1"),
    };
    let h = Subspace::from_indices(n, idx.iter().copied());
    let d = if d.rows() == n && d.cols() == n {
        // full matrix: keep its action on h, which must be preserved
        let mut cols = Vec::with_capacity(n - 1);
        for b in h.basis() {
            let image = d.apply(b)?;
            let coords = h.coordinates(&image).ok_or_else(|| Error::Check("derivation does not preserve the ideal".into()))?;
            cols.push(coords);
        }
        LinearMap::from_columns(&cols)?
    } else {
        d
    };
    Ok((liedegen_core::linalg::basis_vector(n, x_index), h, d))
}

fn load_ideal_args(args: &IdealArgs) -> Result<(LieAlgebra, Vec<Scalar>, Subspace, LinearMap)> {
    let mu = catalog::load_algebra(&args.alg)?;
    let d = load_map(&args.derivation, mu.symbols())?;
    let (x, h, d) = ideal_data(&mu, &args.ideal, args.complement, d)?;
    Ok((mu, x, h, d))
}

fn cocycle(r: &mut Report, args: &IdealArgs) -> Result<()> {
    let (mu, x, h, d) = load_ideal_args(args)?;
    let phi = build_mu_d(&mu, &x, &h, &d)?;
    let report = is_valid_deformation(&mu, &phi)?;
    r.line("mu_D:");
    for l in phi.format_lines(mu.symbols()) {
        r.line(format!("  {l}"));
    }
    r.line(format!("mu + t*mu_D: {}", report.describe()));
    r.set("algebra", json!(mu.name));
    r.set("cocycle", json!(phi.format_lines(mu.symbols())));
    r.set("valid", json!(report.is_valid()));
    r.set("failing_powers", json!(report.failing_powers));
    if !report.is_valid() {
        r.fail();
    }
    Ok(())
}

fn deform_cmd(r: &mut Report, args: &IdealArgs, output: Option<&Path>) -> Result<()> {
    let (mu, x, h, d) = load_ideal_args(args)?;
    let phi = build_mu_d(&mu, &x, &h, &d)?;
    let curve = deform::deform(&mu, &phi)?;
    let realized = curve.realized();
    r.line(format!("{}:", realized.name));
    for l in realized.format_brackets() {
        r.line(format!("  {l}"));
    }
    if let Some(path) = output {
        catalog::save_algebra(realized, path)?;
        r.line(format!("saved curve to {}", path.display()));
    }
    r.set("algebra", json!(mu.name));
    r.set("curve", serde_json::from_str::<Value>(&catalog::algebra_to_json(realized))?);
    Ok(())
}

/// Moves `alg` into the parameter context of `target`.
fn embed(alg: LieAlgebra, target: &Symbols) -> Result<LieAlgebra> {
    let map = alg.symbols().embedding_into(target)?;
    let table = alg.table().map_coefficients(|c| Ok(c.remap(&map)))?;
    Ok(LieAlgebra::new(alg.name, target.clone(), table))
}

fn witness(r: &mut Report, mu1: &Path, curve: &Path, g: &Path, reparametrization: u32) -> Result<()> {
    let curve = catalog::load_algebra(curve)?;
    let syms = curve.symbols().clone();
    let mu1 = embed(catalog::load_algebra(mu1)?, &syms)?;
    if mu1.table().contains_var(liedegen_core::scalar::T) {
        return Err(Error::Invalid("mu1 must not depend on t".into()));
    }
    let g = load_map(g, &syms)?;
    let mut w = WitnessFamily::new(g)?;
    w.reparametrization = reparametrization.max(1);
    let residuals = verify_witness(&mu1, &curve, &w)?;
    let n = mu1.dim();
    let pairs = n * n.saturating_sub(1) / 2;
    let verdict = if residuals.is_empty() { "verified" } else { "FAILED" };
    r.line(format!("witness: {verdict} ({} residuals over {pairs} pairs)", residuals.len()));
    let mut listed = Vec::new();
    for res in &residuals {
        let value = format_vector(&res.residual, &syms);
        r.line(format!("  mu1(g e{i}, g e{j}) - g mu_t(e{i}, e{j}) = {value}", i = res.pair.0 + 1, j = res.pair.1 + 1));
        listed.push(json!({ "pair": [res.pair.0 + 1, res.pair.1 + 1], "value": value }));
    }
    r.set("mu1", json!(mu1.name));
    r.set("curve", json!(curve.name));
    r.set("pairs", json!(pairs));
    r.set("verified", json!(residuals.is_empty()));
    r.set("residuals", Value::Array(listed));
    if !residuals.is_empty() {
        r.fail();
    }
    Ok(())
}

fn limit(r: &mut Report, curve: &LieAlgebra) -> Result<()> {
    let lim = limit_at_zero(curve)?;
    r.line(format!("{}:", lim.name));
    for l in lim.format_brackets() {
        r.line(format!("  {l}"));
    }
    r.set("curve", json!(curve.name));
    r.set("limit", serde_json::from_str::<Value>(&catalog::algebra_to_json(&lim))?);
    Ok(())
}

fn print_certificate(r: &mut Report, cert: &DegenerationCertificate) {
    let source = match cert.witness_source {
        WitnessSource::Explicit => "explicit",
        WitnessSource::Constructed => "constructed",
    };
    r.line(format!("certificate for {} (witness: {source})", cert.base.name));
    for c in &cert.checks {
        r.line(format!("  [{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        for (at, value) in &c.residuals {
            r.line(format!("         at {at}: {value}"));
        }
    }
    if let Some(c) = &cert.constructed {
        if cert.witness_source == WitnessSource::Explicit {
            r.line(format!("  constructed witness: {}", c.detail));
        }
    }
    r.line(format!("certificate: {}", if cert.is_valid() { "VALID" } else { "INVALID" }));
}

#[allow(clippy::too_many_arguments)]
fn pipeline(
    r: &mut Report,
    alg: &Path,
    derivation: &Path,
    ideal: Option<&[usize]>,
    complement: Option<usize>,
    witness: Option<&Path>,
    reparametrization: u32,
) -> Result<()> {
    let mu = catalog::load_algebra(alg)?;
    let d = load_map(derivation, mu.symbols())?;
    let (x, h, d_h) = match ideal {
        Some(ideal) => ideal_data(&mu, ideal, complement, d)?,
        None => {
            let data = theorem1_pipeline(&mu, &d)?;
            r.line(format!("X = {}, h = {}", format_vector(&data.x, mu.symbols()), data.h.format(mu.symbols())));
            (data.x, data.h, data.d_h)
        }
    };
    let g = match witness {
        Some(path) => {
            let mut w = WitnessFamily::new(load_map(path, mu.symbols())?)?;
            w.reparametrization = reparametrization.max(1);
            Some(w)
        }
        None => None,
    };
    let cert = certify_degeneration(&mu, &x, &h, &d_h, g.as_ref());
    print_certificate(r, &cert);
    r.set("certificate", certificate_report(&cert));
    if !cert.is_valid() {
        r.fail();
    }
    Ok(())
}

fn verify_fixtures(r: &mut Report) -> Result<()> {
    let mut entries = Vec::new();
    let mut valid = 0;
    let mut complete = 0;
    for f in catalog::bundled_fixtures()? {
        if !f.is_complete() {
            r.line(format!("{}: skipped, structure constants not bundled (see `liedegen attach`)", f.label));
            entries.push(json!({ "name": f.name, "label": f.label, "status": "requires-external" }));
            continue;
        }
        complete += 1;
        let start = Instant::now();
        let cert = f.certify()?;
        let secs = start.elapsed().as_secs_f64();
        let verdict = if cert.is_valid() { "VALID" } else { "INVALID" };
        r.line(format!("{}: {verdict} ({secs:.2} s)", f.label));
        for c in cert.checks.iter().filter(|c| !c.passed) {
            r.line(format!("  [FAIL] {}: {}", c.name, c.detail));
        }
        if cert.is_valid() {
            valid += 1;
        } else {
            r.fail();
        }
        entries.push(json!({ "name": f.name, "label": f.label, "status": verdict, "certificate": certificate_report(&cert) }));
    }
    r.line(format!("{valid} of {complete} complete fixtures VALID"));
    r.set("fixtures", Value::Array(entries));
    r.set("valid", json!(valid));
    r.set("complete", json!(complete));
    Ok(())
}

fn attach(r: &mut Report, fixture: &str, alg: &Path, replace: bool) -> Result<()> {
    let f = catalog::fixture(fixture)?;
    let mu = catalog::load_algebra(alg)?;
    if f.is_complete() && replace {
        r.line(format!("warning: replacing the bundled structure constants of {}", f.label));
    }
    let completed = catalog::attach_constants(&f, mu, replace)?;
    let cert = completed.certify()?;
    print_certificate(r, &cert);
    r.set("fixture", json!(completed.name));
    r.set("certificate", certificate_report(&cert));
    if !cert.is_valid() {
        r.fail();
    }
    Ok(())
}

fn export(r: &mut Report, name: &str, output: &Path) -> Result<()> {
    let text = catalog::bundled_file(name).ok_or_else(|| {
        let names: Vec<&str> = catalog::bundled_file_names().collect();
        Error::Invalid(format!("no bundled file {name}; available: {}", names.join(", ")))
    })?;
    std::fs::write(output, text)?;
    r.line(format!("wrote {name} to {}", output.display()));
    r.set("file", json!(name));
    Ok(())
}
