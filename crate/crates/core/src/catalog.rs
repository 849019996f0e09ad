//! JSON file formats and the bundled fixtures.
//!
//! * `*.alg.json`: `{"name", "dim", "parameters", "brackets": [{"left", "right", "rhs": [{"k", "c"}]}]}`
//!   with 1-based indices, plus `"variable": "t"` when coefficients involve `t`.
//! * `*.map.json`: `{"rows", "cols", "entries", "convention": "column-image", "parameters"?}`.
//! * `*.cert.json`: certificate report, see [`certificate_report`].
//!
//! Files are written with sorted keys, two-space indentation and arrays or
//! objects of scalars kept on one line, so saving is deterministic.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::degen::{self, DegenerationCertificate, WitnessFamily, WitnessSource};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, StructureTable, Subspace};
use crate::linalg::{self, LinearMap, Vector};
use crate::scalar::{parse_scalar, Scalar, Symbols, T};

pub const CONVENTION: &str = "column-image";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    dim: usize,
    #[serde(default)]
    parameters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variable: Option<String>,
    #[serde(default, skip_serializing)]
    basis: Option<Vec<String>>,
    brackets: Vec<BracketFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketFile {
    left: usize,
    right: usize,
    rhs: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    k: usize,
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
    convention: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    parameters: Vec<String>,
}

/// Serializes a JSON value in the canonical layout.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            if map.values().all(is_scalar) {
                let parts: Vec<String> = keys.iter().map(|k| format!("{}: {}", Value::from(k.as_str()), map[*k])).collect();
                out.push('{');
                out.push_str(&parts.join(", "));
                out.push('}');
                return;
            }
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&format!("{pad}  {}: ", Value::from(k.as_str())));
                write_value(out, &map[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad);
            out.push('}');
        }
        Value::Array(items) => {
            if items.iter().all(is_scalar) {
                let parts: Vec<String> = items.iter().map(Value::to_string).collect();
                out.push('[');
                out.push_str(&parts.join(", "));
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad);
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_coefficient(text: &str, symbols: &Symbols, allow_t: bool, what: &str) -> Result<Scalar> {
    let c = parse_scalar(text, symbols).map_err(|e| match e {
        Error::Syntax { pos, msg } => schema(format!("{what}: cannot parse `{text}` at byte {pos}: {msg}")),
        other => other,
    })?;
    if !allow_t && c.contains_var(T) {
        return Err(schema(format!("{what}: `{text}` uses t but the file does not declare \"variable\": \"t\"")));
    }
    Ok(c)
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    algebra_from_file(file)
}

fn algebra_from_file(file: AlgebraFile) -> Result<LieAlgebra> {
    let symbols = Symbols::new(&file.parameters)?;
    let allow_t = match file.variable.as_deref() {
        None => false,
        Some("t") => true,
        Some(other) => return Err(schema(format!("\"variable\" must be \"t\", found \"{other}\""))),
    };
    if let Some(basis) = &file.basis {
        if basis.len() != file.dim {
            return Err(schema(format!("basis has {} labels, expected {}", basis.len(), file.dim)));
        }
    }
    let n = file.dim;
    let mut seen = BTreeSet::new();
    let mut table = StructureTable::new(n);
    for b in &file.brackets {
        let (i, j) = (b.left, b.right);
        if i == 0 || j == 0 || i > n || j > n {
            return Err(schema(format!("bracket ({i}, {j}) has an index outside 1..{n}")));
        }
        if i == j {
            return Err(schema(format!("bracket ({i}, {i}) pairs a basis vector with itself")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(if seen.contains(&(i, j)) && seen.contains(&(j, i)) || i > j || seen.contains(&(j, i)) {
                schema(format!("bracket of e{} and e{} is given more than once (possibly in both orders)", i.min(j), i.max(j)))
            } else {
                schema(format!("duplicate bracket ({i}, {j})"))
            });
        }
        let mut value: Vector = linalg::zero_vector(n);
        let mut ks = BTreeSet::new();
        for term in &b.rhs {
            if term.k == 0 || term.k > n {
                return Err(schema(format!("bracket ({i}, {j}): component k = {} outside 1..{n}", term.k)));
            }
            if !ks.insert(term.k) {
                return Err(schema(format!("bracket ({i}, {j}): component k = {} listed twice", term.k)));
            }
            let what = format!("bracket ({i}, {j}) component {}", term.k);
            value[term.k - 1] = parse_coefficient(&term.c, &symbols, allow_t, &what)?;
        }
        table.set(i - 1, j - 1, &value)?;
    }
    Ok(LieAlgebra::new(file.name, symbols, table))
}

fn algebra_value(mu: &LieAlgebra) -> Value {
    let symbols = mu.symbols();
    let brackets: Vec<Value> = mu
        .table()
        .iter()
        .map(|(&(i, j), coeffs)| {
            let rhs: Vec<Value> = coeffs.iter().map(|(&k, c)| json!({"k": k + 1, "c": c.format(symbols)})).collect();
            json!({"left": i + 1, "right": j + 1, "rhs": rhs})
        })
        .collect();
    let mut v = json!({
        "name": mu.name,
        "dim": mu.dim(),
        "parameters": symbols.params(),
        "brackets": brackets,
    });
    if mu.table().contains_var(T) {
        v["variable"] = json!("t");
    }
    v
}

pub fn algebra_to_json(mu: &LieAlgebra) -> String {
    to_canonical_json(&algebra_value(mu))
}

pub fn load_algebra(path: impl AsRef<Path>) -> Result<LieAlgebra> {
    parse_algebra(&std::fs::read_to_string(path)?)
}

pub fn save_algebra(mu: &LieAlgebra, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, algebra_to_json(mu))?;
    Ok(())
}

/// Parses a matrix file. With a `context`, the file's declared parameters
/// must belong to it and entries are read in that context; otherwise the
/// file's own parameters are used.
pub fn parse_map(text: &str, context: Option<&Symbols>) -> Result<(LinearMap, Symbols)> {
    let file: MapFile = serde_json::from_str(text)?;
    if file.convention != CONVENTION {
        return Err(schema(format!("\"convention\" must be \"{CONVENTION}\", found \"{}\"", file.convention)));
    }
    let own = Symbols::new(&file.parameters)?;
    let symbols = match context {
        Some(ctx) => {
            own.embedding_into(ctx)?;
            ctx.clone()
        }
        None => own,
    };
    if file.entries.len() != file.rows {
        return Err(schema(format!("\"entries\" has {} rows, expected {}", file.entries.len(), file.rows)));
    }
    let mut rows = Vec::with_capacity(file.rows);
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.cols {
            return Err(schema(format!("row {} has {} entries, expected {}", i + 1, row.len(), file.cols)));
        }
        let parsed: Vector = row
            .iter()
            .enumerate()
            .map(|(j, c)| parse_coefficient(c, &symbols, true, &format!("entry ({}, {})", i + 1, j + 1)))
            .collect::<Result<_>>()?;
        rows.push(parsed);
    }
    let m = if file.rows == 0 { LinearMap::zeros(0, file.cols) } else { LinearMap::from_rows(rows)? };
    Ok((m, symbols))
}

fn map_value(m: &LinearMap, symbols: &Symbols) -> Value {
    let entries: Vec<Vec<String>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).format(symbols)).collect()).collect();
    let mut v = json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
        "convention": CONVENTION,
    });
    if !symbols.params().is_empty() {
        v["parameters"] = json!(symbols.params());
    }
    v
}

pub fn map_to_json(m: &LinearMap, symbols: &Symbols) -> String {
    to_canonical_json(&map_value(m, symbols))
}

pub fn load_map(path: impl AsRef<Path>, context: Option<&Symbols>) -> Result<(LinearMap, Symbols)> {
    parse_map(&std::fs::read_to_string(path)?, context)
}

pub fn save_map(m: &LinearMap, symbols: &Symbols, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, map_to_json(m, symbols))?;
    Ok(())
}

/// Machine-readable certificate report.
pub fn certificate_report(cert: &DegenerationCertificate) -> Value {
    let symbols = cert.base.symbols();
    let checks: Vec<Value> = cert
        .checks
        .iter()
        .map(|c| {
            let residuals: Vec<Value> = c.residuals.iter().map(|(at, v)| json!({"at": at, "value": v})).collect();
            json!({"name": c.name, "passed": c.passed, "detail": c.detail, "residuals": residuals})
        })
        .collect();
    let witness = |w: &WitnessFamily| {
        let mut v = map_value(&w.g, symbols);
        v["reparametrization"] = json!(w.reparametrization);
        v
    };
    let constructed = cert.constructed.as_ref().map(|c| {
        json!({
            "verified": c.verified,
            "detail": c.detail,
            "derivation": c.extension.as_ref().map(|e| map_value(&e.derivation, symbols)),
            "x_eigenvalue": c.extension.as_ref().map(|e| e.x_eigenvalue.to_string()),
            "eigenvector_form": c.extension.as_ref().map(|e| e.eigenvector_form),
            "witness": c.witness.as_ref().map(witness),
        })
    });
    json!({
        "algebra": cert.base.name,
        "valid": cert.is_valid(),
        "witness_source": match cert.witness_source {
            WitnessSource::Explicit => "explicit",
            WitnessSource::Constructed => "constructed",
        },
        "checks": checks,
        "curve": cert.curve.as_ref().map(|c| algebra_value(c.realized())),
        "mu1": cert.mu1.as_ref().map(algebra_value),
        "witness": cert.witness.as_ref().map(witness),
        "constructed": constructed,
    })
}

// ---------------------------------------------------------------------------
// Bundled fixtures
// ---------------------------------------------------------------------------

macro_rules! bundle {
    ($($f:literal),* $(,)?) => {
        &[$(($f, include_str!(concat!("../fixtures/", $f)))),*]
    };
}

const BUNDLED: &[(&str, &str)] = bundle![
    "catalog.json",
    "external_constants_template.json",
    "12346E.alg.json",
    "12346E.derivation.map.json",
    "12346E.witness.map.json",
    "g7_0_4.alg.json",
    "g7_0_4.derivation.map.json",
    "g7_0_4.witness.map.json",
    "g7_0_1.derivation.map.json",
    "g7_0_1.witness.map.json",
    "g7_0_2.derivation.map.json",
    "g7_0_2.witness.map.json",
    "g7_0_3.derivation.map.json",
    "g7_0_3.witness.map.json",
    "g7_0_5.derivation.map.json",
    "g7_0_5.witness.map.json",
    "g7_0_6.derivation.map.json",
    "g7_0_6.witness.map.json",
    "g7_0_7.derivation.map.json",
    "g7_0_7.witness.map.json",
    "g7_0_8.derivation.map.json",
    "g7_0_8.witness.map.json",
];

/// Contents of a bundled fixture file.
pub fn bundled_file(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn bundled_file_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    fixtures: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    name: String,
    label: String,
    algebra: Option<String>,
    parameters: Vec<String>,
    ideal: Vec<usize>,
    complement: usize,
    derivation: String,
    witness: String,
    requires_external: bool,
    note: String,
}

/// Degeneration data `(μ, h, X, D, g_t)`; `algebra` is `None` until the
/// structure constants are supplied.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub label: String,
    pub algebra: Option<LieAlgebra>,
    pub symbols: Symbols,
    /// 0-based basis indices spanning the ideal.
    pub ideal: Vec<usize>,
    /// 0-based index of the basis vector used as `X`.
    pub complement: usize,
    pub derivation: LinearMap,
    pub witness: WitnessFamily,
    pub note: String,
    pub requires_external: bool,
}

impl Fixture {
    pub fn dim(&self) -> usize {
        self.witness.dim()
    }

    pub fn ideal_subspace(&self) -> Subspace {
        Subspace::from_indices(self.dim(), self.ideal.iter().copied())
    }

    pub fn x_vector(&self) -> Vector {
        linalg::basis_vector(self.dim(), self.complement)
    }

    pub fn is_complete(&self) -> bool {
        self.algebra.is_some()
    }

    /// Certifies with the bundled witness.
    pub fn certify(&self) -> Result<DegenerationCertificate> {
        let mu = self.algebra.as_ref().ok_or_else(|| {
            Error::Unsupported(format!("fixture {} has no structure constants; attach them first", self.name))
        })?;
        Ok(degen::certify_degeneration(mu, &self.x_vector(), &self.ideal_subspace(), &self.derivation, Some(&self.witness)))
    }
}

fn required(name: &str) -> Result<&'static str> {
    bundled_file(name).ok_or_else(|| Error::Invalid(format!("bundled file {name} is missing")))
}

fn fixture_from_entry(e: ManifestEntry) -> Result<Fixture> {
    let symbols = Symbols::new(&e.parameters)?;
    let (derivation, _) = parse_map(required(&e.derivation)?, Some(&symbols))?;
    let (g, _) = parse_map(required(&e.witness)?, Some(&symbols))?;
    let witness = WitnessFamily::new(g)?;
    let algebra = match &e.algebra {
        Some(f) => Some(parse_algebra(required(f)?)?),
        None => None,
    };
    if e.requires_external == algebra.is_some() {
        return Err(Error::Invalid(format!("fixture {}: requires_external disagrees with the algebra entry", e.name)));
    }
    if e.complement == 0 || e.ideal.contains(&0) {
        return Err(Error::Invalid(format!("fixture {}: indices are 1-based", e.name)));
    }
    Ok(Fixture {
        name: e.name,
        label: e.label,
        algebra,
        symbols,
        ideal: e.ideal.iter().map(|i| i - 1).collect(),
        complement: e.complement - 1,
        derivation,
        witness,
        note: e.note,
        requires_external: e.requires_external,
    })
}

/// All bundled fixtures in manifest order.
pub fn bundled_fixtures() -> Result<Vec<Fixture>> {
    let manifest: Manifest = serde_json::from_str(required("catalog.json")?)?;
    manifest.fixtures.into_iter().map(fixture_from_entry).collect()
}

/// Looks up a bundled fixture by name or label.
pub fn fixture(name: &str) -> Result<Fixture> {
    bundled_fixtures()?
        .into_iter()
        .find(|f| f.name == name || f.label == name)
        .ok_or_else(|| Error::Invalid(format!("no bundled fixture named {name}")))
}

/// Algebras listed in the external constants template, in file order.
pub fn template_algebras(text: &str) -> Result<Vec<LieAlgebra>> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Template {
        #[allow(dead_code)]
        description: String,
        algebras: Vec<AlgebraFile>,
    }
    let t: Template = serde_json::from_str(text)?;
    t.algebras.into_iter().map(algebra_from_file).collect()
}

/// Completes a fixture with structure constants. The algebra must carry the
/// fixture's name or label and its dimension; an already complete fixture is
/// only overwritten when `replace` is set.
pub fn attach_constants(fixture: &Fixture, mu: LieAlgebra, replace: bool) -> Result<Fixture> {
    if mu.dim() != fixture.dim() {
        return Err(Error::Dimension(format!("fixture {} has dimension {}, algebra has {}", fixture.name, fixture.dim(), mu.dim())));
    }
    if mu.name != fixture.name && mu.name != fixture.label {
        return Err(Error::Invalid(format!("algebra is named {}, fixture expects {}", mu.name, fixture.name)));
    }
    if fixture.is_complete() && !replace {
        return Err(Error::Invalid(format!("fixture {} already has structure constants", fixture.name)));
    }
    if mu.table().is_zero() {
        return Err(Error::Invalid(format!("algebra {} has no brackets; fill in its structure constants first", mu.name)));
    }
    if mu.table().contains_var(T) {
        return Err(Error::Invalid("structure constants must not involve t".into()));
    }
    let map = fixture.symbols.embedding_into(mu.symbols())?;
    let remap = |m: &LinearMap| m.map_entries(|s| Ok(s.remap(&map)));
    let mut out = fixture.clone();
    out.derivation = remap(&fixture.derivation)?;
    out.witness = WitnessFamily { g: remap(&fixture.witness.g)?, reparametrization: fixture.witness.reparametrization };
    out.symbols = mu.symbols().clone();
    out.algebra = Some(mu);
    out.requires_external = false;
    Ok(out)
}
