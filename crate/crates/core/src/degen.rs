//! Degeneration witnesses `g_t` with `μ₁(g_t x, g_t y) = g_t μ_t(x, y)` and
//! end-to-end certification.

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::deform::{self, DeformationCurve};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, PairResidual, Subspace};
use crate::linalg::{self, is_zero_vector, LinearMap, Vector};
use crate::scalar::{Rational, Scalar, T};

/// Invertible family `g_t`. When `reparametrization` is `N > 1` the family
/// witnesses the curve with `t` replaced by `t^N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessFamily {
    pub g: LinearMap,
    pub reparametrization: u32,
}

impl WitnessFamily {
    pub fn new(g: LinearMap) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::Dimension(format!("witness is {}x{}", g.rows(), g.cols())));
        }
        if g.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(WitnessFamily { g, reparametrization: 1 })
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }
}

/// Curve table with `t ↦ t^N`.
pub fn reparametrize(curve: &LieAlgebra, n: u32) -> Result<LieAlgebra> {
    if n == 1 {
        return Ok(curve.clone());
    }
    curve.substitute(T, &Scalar::t_pow(i64::from(n)))
}

/// Basis pairs `i < j` where `μ₁(g e_i, g e_j) ≠ g μ_t(e_i, e_j)`.
pub fn verify_witness(mu1: &LieAlgebra, curve: &LieAlgebra, w: &WitnessFamily) -> Result<Vec<PairResidual>> {
    let n = mu1.dim();
    if curve.dim() != n || w.dim() != n {
        return Err(Error::Dimension(format!(
            "dimensions differ: mu1 {}, curve {}, witness {}",
            n,
            curve.dim(),
            w.dim()
        )));
    }
    let curve = reparametrize(curve, w.reparametrization)?;
    let images: Vec<Vector> = (0..n).map(|j| w.g.column(j)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let found: Vec<Option<PairResidual>> = pairs
        .into_par_iter()
        .map(|(i, j)| -> Result<Option<PairResidual>> {
            let lhs = mu1.table().apply(&images[i], &images[j]);
            let rhs = w.g.apply(&curve.table().get(i, j))?;
            let r = linalg::sub_vectors(&lhs, &rhs);
            Ok((!is_zero_vector(&r)).then_some(PairResidual { pair: (i, j), residual: r }))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// `diag(t^{N w_1}, …, t^{N w_n})` with `N` the lcm of the weight denominators.
pub fn witness_from_weights(weights: &[Rational]) -> WitnessFamily {
    let n = lcm_of_denominators(weights);
    let diag: Vec<Scalar> = weights.iter().map(|w| Scalar::t_pow(int_exponent(w, n))).collect();
    WitnessFamily { g: LinearMap::diagonal(&diag), reparametrization: n }
}

fn lcm_of_denominators(weights: &[Rational]) -> u32 {
    let l = weights.iter().fold(num_bigint::BigInt::one(), |acc, w| acc.lcm(w.denom()));
    u32::try_from(l).expect("weight denominators fit in u32")
}

fn int_exponent(w: &Rational, n: u32) -> i64 {
    let e = (w * Rational::from_integer(n.into())).to_integer();
    i64::try_from(e).expect("weight exponent fits in i64")
}

/// `t^{D̃} = P diag(t^{Nλ}) P⁻¹` for a semisimple `D̃` with rational eigenvalues.
pub fn witness_from_derivation(d: &LinearMap) -> Result<WitnessFamily> {
    if let Some(diag) = diagonal_entries(d) {
        return Ok(witness_from_weights(&diag));
    }
    let eigen = d.rational_eigenvalues()?;
    let weights: Vec<Rational> = eigen.iter().map(|(w, _)| w.clone()).collect();
    let n = lcm_of_denominators(&weights);
    let mut cols = Vec::new();
    let mut diag = Vec::new();
    for (w, vecs) in &eigen {
        for v in vecs {
            cols.push(v.clone());
            diag.push(Scalar::t_pow(int_exponent(w, n)));
        }
    }
    let p = LinearMap::from_columns(&cols)?;
    let g = p.matmul(&LinearMap::diagonal(&diag))?.matmul(&p.inverse()?)?;
    Ok(WitnessFamily { g, reparametrization: n })
}

fn diagonal_entries(d: &LinearMap) -> Option<Vec<Rational>> {
    if !d.is_square() {
        return None;
    }
    let n = d.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && !d.get(i, j).is_zero() {
                return None;
            }
        }
    }
    (0..n).map(|i| d.get(i, i).as_rational()).collect()
}

/// Derivation of the whole algebra extending a derivation of `h`.
#[derive(Clone, Debug)]
pub struct Extension {
    /// `D̃ / λ₀`, so that the `X`-component of `D̃X` is 1.
    pub derivation: LinearMap,
    /// `X`-component `λ₀` of the unnormalized extension.
    pub x_eigenvalue: Rational,
    /// Whether `D̃X = λ₀X` exactly.
    pub eigenvector_form: bool,
}

/// Finds `D̃ ∈ Der(μ)` with `D̃|h = D` whose `X`-component on `X` is nonzero,
/// preferring `D̃X = λ₀X`. `None` if no such extension exists.
pub fn extend_derivation(mu: &LieAlgebra, h: &Subspace, d: &LinearMap, x: &[Scalar]) -> Result<Option<Extension>> {
    deform::check_ideal_data(mu, x, h)?;
    deform::check_derivation_on(mu, h, d)?;
    for eigen_form in [true, false] {
        if let Some(ext) = solve_extension(mu, h, d, x, eigen_form)? {
            return Ok(Some(ext));
        }
    }
    Ok(None)
}

/// Unknowns: the `n²` entries of `D̃` (row-major) and `λ` at index `n²`.
fn solve_extension(
    mu: &LieAlgebra,
    h: &Subspace,
    d: &LinearMap,
    x: &[Scalar],
    eigen_form: bool,
) -> Result<Option<Extension>> {
    let n = mu.dim();
    let nn = n * n;
    let width = nn + 1;
    let idx = |a: usize, b: usize| a * n + b;
    let mut rows: Vec<Vector> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();

    for m in mu.derivation_space_equations() {
        let mut row = m;
        row.push(Scalar::zero());
        rows.push(row);
        rhs.push(Scalar::zero());
    }
    // D̃ b_k = Σ_l D[l][k] b_l for the echelon basis b of h.
    for (k, b) in h.basis().iter().enumerate() {
        let target = h.combine(&d.column(k));
        for a in 0..n {
            let mut row = linalg::zero_vector(width);
            for (c, bc) in b.iter().enumerate() {
                if !bc.is_zero() {
                    row[idx(a, c)] = bc.clone();
                }
            }
            rows.push(row);
            rhs.push(target[a].clone());
        }
    }
    if eigen_form {
        // D̃X - λX = 0.
        for a in 0..n {
            let mut row = linalg::zero_vector(width);
            for (c, xc) in x.iter().enumerate() {
                if !xc.is_zero() {
                    row[idx(a, c)] = xc.clone();
                }
            }
            row[nn] = -&x[a];
            rows.push(row);
            rhs.push(Scalar::zero());
        }
    } else {
        // λ equals the X-coordinate of D̃X in the basis [X | h].
        let mut cols = vec![x.to_vec()];
        cols.extend(h.basis().iter().cloned());
        let split = LinearMap::from_columns(&cols)?.inverse()?;
        let first = split.row(0);
        let mut row = linalg::zero_vector(width);
        for a in 0..n {
            for (c, xc) in x.iter().enumerate() {
                if !xc.is_zero() && !first[a].is_zero() {
                    row[idx(a, c)] = &row[idx(a, c)] + &(&first[a] * xc);
                }
            }
        }
        row[nn] = -Scalar::one();
        rows.push(row);
        rhs.push(Scalar::zero());
    }

    let solve = |extra: Option<Scalar>| -> Result<Option<Vector>> {
        let mut r = rows.clone();
        let mut b = rhs.clone();
        if let Some(v) = extra {
            let mut row = linalg::zero_vector(width);
            row[nn] = Scalar::one();
            r.push(row);
            b.push(v);
        }
        let a = LinearMap::from_rows(r)?;
        Ok(linalg::solve_affine(&a, &b)?.map(|(p, _)| p))
    };
    let solution = match solve(Some(Scalar::one()))? {
        Some(s) => Some(s),
        None => solve(None)?,
    };
    let Some(sol) = solution else {
        return Ok(None);
    };
    let lambda = &sol[nn];
    let Some(lambda_q) = lambda.as_rational() else {
        return Err(Error::Unsupported("extension eigenvalue depends on parameters".into()));
    };
    if lambda_q.is_zero() {
        return Ok(None);
    }
    let inv = lambda.inv()?;
    let rows_d: Vec<Vector> = sol[..nn].chunks(n).map(|r| linalg::scale_vector(&inv, r)).collect();
    Ok(Some(Extension { derivation: LinearMap::from_rows(rows_d)?, x_eigenvalue: lambda_q, eigenvector_form: eigen_form }))
}

/// Entrywise `t → 0` limit of a table; every coefficient must be regular at 0.
pub fn limit_at_zero(curve: &LieAlgebra) -> Result<LieAlgebra> {
    let mut table = crate::lie::StructureTable::new(curve.dim());
    for (&(i, j), coeffs) in curve.table().iter() {
        for (&k, c) in coeffs {
            let v = c.valuation_at_t0().unwrap_or(0);
            if v < 0 {
                return Err(Error::PoleAtZero {
                    entry: format!("coefficient of e{} in [e{}, e{}]", k + 1, i + 1, j + 1),
                    valuation: v,
                });
            }
            let limit = c.limit_at_t0().expect("regular at t = 0");
            table.set_coefficient(i, j, k, limit)?;
        }
    }
    let out = LieAlgebra::new(format!("lim {}", curve.name), curve.symbols().clone(), table);
    if let Some(r) = out.jacobi_residuals().first() {
        let (a, b, c) = r.triple;
        return Err(Error::Check(format!("limit violates Jacobi on (e{}, e{}, e{})", a + 1, b + 1, c + 1)));
    }
    Ok(out)
}

/// One named check of a certificate.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// `(location, value)` pairs, e.g. `("(e1, e2)", "t*e3")`.
    pub residuals: Vec<(String, String)>,
}

impl CheckResult {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult { name, passed: true, detail: detail.into(), residuals: Vec::new() }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult { name, passed: false, detail: detail.into(), residuals: Vec::new() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessSource {
    Explicit,
    Constructed,
}

/// Result of building a witness from an extended derivation, reported
/// alongside an explicit witness or used in its place.
#[derive(Clone, Debug)]
pub struct ConstructedWitness {
    pub extension: Option<Extension>,
    pub witness: Option<WitnessFamily>,
    pub verified: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct DegenerationCertificate {
    pub base: LieAlgebra,
    pub curve: Option<DeformationCurve>,
    pub mu1: Option<LieAlgebra>,
    pub witness: Option<WitnessFamily>,
    pub witness_source: WitnessSource,
    pub constructed: Option<ConstructedWitness>,
    pub checks: Vec<CheckResult>,
}

impl DegenerationCertificate {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_NAMES: [&str; 7] = ["jacobi", "ideal", "derivation", "cocycle", "witness", "limit", "solvable-not-nilpotent"];

fn pair_label(p: (usize, usize)) -> String {
    format!("(e{}, e{})", p.0 + 1, p.1 + 1)
}

fn construct_witness(mu: &LieAlgebra, h: &Subspace, d: &LinearMap, x: &[Scalar], mu1: &LieAlgebra, curve: &LieAlgebra) -> ConstructedWitness {
    let ext = match extend_derivation(mu, h, d, x) {
        Ok(Some(e)) => e,
        Ok(None) => {
            return ConstructedWitness {
                extension: None,
                witness: None,
                verified: false,
                detail: "no derivation of the algebra extends D with nonzero X-component".into(),
            }
        }
        Err(e) => {
            return ConstructedWitness { extension: None, witness: None, verified: false, detail: e.to_string() }
        }
    };
    let built = mu.eigen_grading(&ext.derivation).and_then(|_| witness_from_derivation(&ext.derivation));
    let w = match built {
        Ok(w) => w,
        Err(e) => {
            return ConstructedWitness { extension: Some(ext), witness: None, verified: false, detail: e.to_string() }
        }
    };
    match verify_witness(mu1, curve, &w) {
        Ok(r) if r.is_empty() => ConstructedWitness {
            extension: Some(ext),
            witness: Some(w),
            verified: true,
            detail: "constructed 1-PSG witness verifies".into(),
        },
        Ok(r) => ConstructedWitness {
            extension: Some(ext),
            witness: Some(w),
            verified: false,
            detail: format!("constructed witness leaves {} nonzero residuals", r.len()),
        },
        Err(e) => ConstructedWitness { extension: Some(ext), witness: Some(w), verified: false, detail: e.to_string() },
    }
}

/// Runs every step of the degeneration argument; failures become failing
/// checks rather than errors.
pub fn certify_degeneration(
    mu: &LieAlgebra,
    x: &[Scalar],
    h: &Subspace,
    d: &LinearMap,
    g: Option<&WitnessFamily>,
) -> DegenerationCertificate {
    let mut cert = DegenerationCertificate {
        base: mu.clone(),
        curve: None,
        mu1: None,
        witness: None,
        witness_source: if g.is_some() { WitnessSource::Explicit } else { WitnessSource::Constructed },
        constructed: None,
        checks: Vec::new(),
    };
    let skip = |cert: &mut DegenerationCertificate, from: usize, why: &str| {
        for name in &CHECK_NAMES[from..] {
            cert.checks.push(CheckResult::fail(name, format!("not run: {why}")));
        }
    };

    let jacobi = mu.jacobi_residuals();
    let mut c = if jacobi.is_empty() {
        CheckResult::pass("jacobi", format!("0 residuals over {} triples", mu.num_triples()))
    } else {
        CheckResult::fail("jacobi", format!("{} nonzero residuals", jacobi.len()))
    };
    c.residuals = jacobi
        .iter()
        .map(|r| {
            let (a, b, k) = r.triple;
            (format!("(e{}, e{}, e{})", a + 1, b + 1, k + 1), linalg::format_vector(&r.residual, mu.symbols()))
        })
        .collect();
    cert.checks.push(c);

    match deform::check_ideal_data(mu, x, h) {
        Ok(()) => cert.checks.push(CheckResult::pass("ideal", format!("{} is a codimension-1 ideal", h.format(mu.symbols())))),
        Err(e) => {
            cert.checks.push(CheckResult::fail("ideal", e.to_string()));
            skip(&mut cert, 2, "h is not a codimension-1 ideal");
            return cert;
        }
    }
    match deform::check_derivation_on(mu, h, d) {
        Ok(_) => cert.checks.push(CheckResult::pass("derivation", "D is a derivation of h")),
        Err(e) => {
            cert.checks.push(CheckResult::fail("derivation", e.to_string()));
            skip(&mut cert, 3, "D is not a derivation of h");
            return cert;
        }
    }

    let phi = match deform::build_mu_d(mu, x, h, d) {
        Ok(p) => p,
        Err(e) => {
            cert.checks.push(CheckResult::fail("cocycle", e.to_string()));
            skip(&mut cert, 4, "cocycle construction failed");
            return cert;
        }
    };
    let report = match deform::is_valid_deformation(mu, &phi) {
        Ok(r) => r,
        Err(e) => {
            cert.checks.push(CheckResult::fail("cocycle", e.to_string()));
            skip(&mut cert, 4, "cocycle check failed");
            return cert;
        }
    };
    if !report.is_valid() {
        let mut c = CheckResult::fail("cocycle", report.describe());
        c.residuals = report
            .residuals
            .iter()
            .map(|r| {
                let (a, b, k) = r.triple;
                (format!("(e{}, e{}, e{})", a + 1, b + 1, k + 1), linalg::format_vector(&r.residual, mu.symbols()))
            })
            .collect();
        cert.checks.push(c);
        skip(&mut cert, 4, "mu + t*mu_D is not a deformation");
        return cert;
    }
    cert.checks.push(CheckResult::pass("cocycle", "mu + t*mu_D satisfies Jacobi identically in t"));
    let curve = deform::deform(mu, &phi).expect("validated above");
    let mu1 = match deform::specialize(&curve, &Rational::one()) {
        Ok(m) => m,
        Err(e) => {
            skip(&mut cert, 4, &e.to_string());
            return cert;
        }
    };
    let realized = curve.realized().clone();
    cert.curve = Some(curve);
    cert.mu1 = Some(mu1.clone());

    let (explicit, constructed) = rayon::join(
        || g.map(|w| verify_witness(&mu1, &realized, w)),
        || construct_witness(mu, h, d, x, &mu1, &realized),
    );
    let witness = match (g, explicit) {
        (Some(w), Some(Ok(res))) => {
            let mut c = if res.is_empty() {
                CheckResult::pass("witness", "explicit witness: 0 residuals")
            } else {
                CheckResult::fail("witness", format!("explicit witness: {} nonzero residuals", res.len()))
            };
            c.residuals = res.iter().map(|r| (pair_label(r.pair), linalg::format_vector(&r.residual, mu.symbols()))).collect();
            let ok = c.passed;
            cert.checks.push(c);
            ok.then(|| w.clone())
        }
        (Some(_), Some(Err(e))) => {
            cert.checks.push(CheckResult::fail("witness", e.to_string()));
            None
        }
        _ => {
            if constructed.verified {
                cert.checks.push(CheckResult::pass("witness", constructed.detail.clone()));
            } else {
                cert.checks.push(CheckResult::fail("witness", constructed.detail.clone()));
            }
            constructed.witness.clone().filter(|_| constructed.verified)
        }
    };
    cert.constructed = Some(constructed);

    match &witness {
        Some(w) => cert.checks.push(limit_check(mu, &mu1, &realized, w)),
        None => cert.checks.push(CheckResult::fail("limit", "not run: no verified witness")),
    }
    cert.witness = witness.or_else(|| g.cloned());

    let nil = mu.is_nilpotent();
    let solv = mu1.is_solvable();
    let nil1 = mu1.is_nilpotent();
    let detail = format!("mu nilpotent: {nil}; mu1 solvable: {solv}; mu1 nilpotent: {nil1}");
    cert.checks.push(if nil && solv && !nil1 {
        CheckResult::pass("solvable-not-nilpotent", detail)
    } else {
        CheckResult::fail("solvable-not-nilpotent", detail)
    });
    cert
}

/// `g⁻¹·μ₁` must equal the curve and tend to `μ` as `t → 0`.
fn limit_check(mu: &LieAlgebra, mu1: &LieAlgebra, curve: &LieAlgebra, w: &WitnessFamily) -> CheckResult {
    let run = || -> Result<CheckResult> {
        let ginv = w.g.inverse()?;
        let conj = mu1.gl_action_with_inverse(&ginv, &w.g)?;
        let target = reparametrize(curve, w.reparametrization)?;
        if !conj.same_brackets(&target) {
            return Ok(CheckResult::fail("limit", "g^-1 . mu1 differs from the curve table"));
        }
        let lim = limit_at_zero(&conj)?;
        if lim.same_brackets(mu) {
            Ok(CheckResult::pass("limit", "g^-1 . mu1 equals the curve and tends to mu as t -> 0"))
        } else {
            Ok(CheckResult::fail("limit", "limit of g^-1 . mu1 differs from mu"))
        }
    };
    run().unwrap_or_else(|e| CheckResult::fail("limit", e.to_string()))
}
