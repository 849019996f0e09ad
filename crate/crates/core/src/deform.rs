//! Linear deformations `μ_t = μ + tφ` built from a codimension-1 ideal with
//! a derivation.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lie::{JacobiResidual, LieAlgebra, StructureTable, Subspace};
use crate::linalg::{self, LinearMap, Vector};
use crate::scalar::{Rational, Scalar, T};

/// Skew bilinear form, stored like a structure table.
pub type BilinearForm = StructureTable;

/// Outcome of checking that `μ + tφ` satisfies Jacobi identically in `t`.
#[derive(Clone, Debug)]
pub struct DeformationReport {
    pub residuals: Vec<JacobiResidual>,
    /// Powers of `t` with a nonzero coefficient somewhere in the residuals:
    /// 0 is Jacobi for `μ`, 1 the cocycle condition, 2 Jacobi for `φ`.
    pub failing_powers: Vec<u32>,
}

impl DeformationReport {
    pub fn is_valid(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn describe(&self) -> String {
        if self.is_valid() {
            return "valid deformation".into();
        }
        let names: Vec<String> = self
            .failing_powers
            .iter()
            .map(|p| match p {
                0 => "t^0 (Jacobi of the base)".to_string(),
                1 => "t^1 (cocycle condition)".to_string(),
                2 => "t^2 (Jacobi of the form)".to_string(),
                k => format!("t^{k}"),
            })
            .collect();
        format!("Jacobi fails on {} triples; nonzero coefficients at {}", self.residuals.len(), names.join(", "))
    }
}

/// `μ_t = μ + tφ` together with its realized table over ℚ(t, params).
#[derive(Clone, Debug)]
pub struct DeformationCurve {
    base: LieAlgebra,
    cocycle: BilinearForm,
    realized: LieAlgebra,
}

impl DeformationCurve {
    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    pub fn cocycle(&self) -> &BilinearForm {
        &self.cocycle
    }

    /// The table `μ + tφ`.
    pub fn realized(&self) -> &LieAlgebra {
        &self.realized
    }

    /// Splits a table that is affine-linear in `t` into base and cocycle.
    pub fn from_realized(realized: LieAlgebra) -> Result<Self> {
        let n = realized.dim();
        let mut base = StructureTable::new(n);
        let mut cocycle = StructureTable::new(n);
        for (&(i, j), coeffs) in realized.table().iter() {
            for (&k, c) in coeffs {
                let (c0, c1) = split_linear_in_t(c).ok_or_else(|| {
                    Error::Invalid(format!(
                        "coefficient of e{} in [e{}, e{}] is not of the form a + b*t",
                        k + 1,
                        i + 1,
                        j + 1
                    ))
                })?;
                base.set_coefficient(i, j, k, c0)?;
                cocycle.set_coefficient(i, j, k, c1)?;
            }
        }
        let base = LieAlgebra::new(realized.name.clone(), realized.symbols().clone(), base);
        Ok(DeformationCurve { base, cocycle, realized })
    }
}

fn split_linear_in_t(c: &Scalar) -> Option<(Scalar, Scalar)> {
    if c.denom().contains_var(T) {
        return None;
    }
    let parts = c.numer().to_univariate(T);
    if parts.len() > 2 {
        return None;
    }
    let den = Scalar::from_poly(c.denom().clone());
    let get = |k: usize| parts.get(k).map(|p| &Scalar::from_poly(p.clone()) / &den).unwrap_or_else(Scalar::zero);
    Some((get(0), get(1)))
}

fn realize(mu: &LieAlgebra, phi: &BilinearForm) -> Result<LieAlgebra> {
    let table = mu.table().combine(phi, &Scalar::t())?;
    Ok(LieAlgebra::new(mu.name.clone(), mu.symbols().clone(), table))
}

/// Checks that `μ + tφ` is a Lie bracket for all `t`.
pub fn is_valid_deformation(mu: &LieAlgebra, phi: &BilinearForm) -> Result<DeformationReport> {
    let realized = realize(mu, phi)?;
    let residuals = realized.jacobi_residuals();
    let powers: BTreeSet<u32> =
        residuals.iter().flat_map(|r| r.residual.iter().flat_map(Scalar::numerator_t_powers)).collect();
    Ok(DeformationReport { residuals, failing_powers: powers.into_iter().collect() })
}

pub fn deform(mu: &LieAlgebra, phi: &BilinearForm) -> Result<DeformationCurve> {
    let report = is_valid_deformation(mu, phi)?;
    if !report.is_valid() {
        return Err(Error::Check(report.describe()));
    }
    Ok(DeformationCurve { base: mu.clone(), cocycle: phi.clone(), realized: realize(mu, phi)? })
}

/// Substitutes `t = t0` into the realized table.
pub fn specialize(curve: &DeformationCurve, t0: &Rational) -> Result<LieAlgebra> {
    let mut out = curve.realized.substitute(T, &Scalar::from_rational(t0.clone()))?;
    out.name = format!("{}(t={})", curve.realized.name, t0);
    Ok(out)
}

/// Basis change `[X | h-basis]` used to split `e_i = a_i X + z_i`.
fn split_basis(x: &[Scalar], h: &Subspace) -> Result<LinearMap> {
    let mut cols = vec![x.to_vec()];
    cols.extend(h.basis().iter().cloned());
    LinearMap::from_columns(&cols)?.inverse().map_err(|_| Error::Invalid("X together with h does not span the algebra".into()))
}

/// Checks that `h` is a codimension-1 ideal not containing `x`.
pub fn check_ideal_data(mu: &LieAlgebra, x: &[Scalar], h: &Subspace) -> Result<()> {
    let n = mu.dim();
    if x.len() != n || h.ambient() != n {
        return Err(Error::Dimension(format!("X and h must live in F^{n}")));
    }
    if h.dim() + 1 != n {
        return Err(Error::Invalid(format!("h has dimension {}, expected {}", h.dim(), n - 1)));
    }
    if h.contains(x) {
        return Err(Error::Invalid("X lies in h".into()));
    }
    if let Some(&(i, b)) = mu.ideal_violations(h).first() {
        return Err(Error::Check(format!("h is not an ideal: [e{}, h_{}] leaves h", i + 1, b + 1)));
    }
    Ok(())
}

/// Checks that `d`, written in the echelon basis of `h`, is a derivation of `μ|h`.
pub fn check_derivation_on(mu: &LieAlgebra, h: &Subspace, d: &LinearMap) -> Result<LieAlgebra> {
    let restricted = mu.restrict(h)?;
    if d.rows() != h.dim() || d.cols() != h.dim() {
        return Err(Error::Dimension(format!("derivation is {}x{}, h has dimension {}", d.rows(), d.cols(), h.dim())));
    }
    if let Some(r) = restricted.derivation_residuals(d)?.first() {
        return Err(Error::Check(format!(
            "D is not a derivation of h: Leibniz rule fails on basis vectors ({}, {}) of h",
            r.pair.0 + 1,
            r.pair.1 + 1
        )));
    }
    Ok(restricted)
}

/// The form with `φ(X, z) = D z` for `z ∈ h` and `φ(h, h) = 0`.
pub fn build_mu_d(mu: &LieAlgebra, x: &[Scalar], h: &Subspace, d: &LinearMap) -> Result<BilinearForm> {
    check_ideal_data(mu, x, h)?;
    check_derivation_on(mu, h, d)?;
    let n = mu.dim();
    let split = split_basis(x, h)?;
    let coords: Vec<Vector> = (0..n).map(|i| split.column(i)).collect();
    let dz: Vec<Vector> = coords.iter().map(|c| d.apply(&c[1..]).map(|v| h.combine(&v))).collect::<Result<_>>()?;
    StructureTable::from_pairs(n, |i, j| {
        let mut v = linalg::scale_vector(&coords[i][0], &dz[j]);
        linalg::axpy(&mut v, &-&coords[j][0], &dz[i]);
        Ok(v)
    })
}

/// Output of the ideal-construction pipeline.
#[derive(Clone, Debug)]
pub struct PipelineData {
    pub x: Vector,
    pub x_eigenvalue: Rational,
    pub h: Subspace,
    /// `D` restricted to `h`, in the echelon basis of `h`.
    pub d_h: LinearMap,
}

/// Builds `(X, h, D|h)` from a semisimple derivation `D` of a nilpotent
/// algebra: complete `[n, n]` with eigenvectors of `D`, take the first one as
/// `X` and let `h` be spanned by the rest together with `[n, n]`.
pub fn theorem1_pipeline(mu: &LieAlgebra, d: &LinearMap) -> Result<PipelineData> {
    let n = mu.dim();
    if n == 0 {
        return Err(Error::Invalid("zero-dimensional algebra".into()));
    }
    if !mu.is_nilpotent() {
        return Err(Error::Invalid("algebra is not nilpotent".into()));
    }
    if d.is_zero() {
        return Err(Error::Invalid("derivation is trivial".into()));
    }
    if let Some(r) = mu.derivation_residuals(d)?.first() {
        return Err(Error::Check(format!(
            "map is not a derivation: Leibniz rule fails on (e{}, e{})",
            r.pair.0 + 1,
            r.pair.1 + 1
        )));
    }
    let mut eigen = d.rational_eigenvalues()?;
    eigen.sort_by(|a, b| (a.0 == Rational::from_integer(0.into())).cmp(&(b.0 == Rational::from_integer(0.into()))).then(a.0.cmp(&b.0)));

    let whole = Subspace::whole(n);
    let derived = mu.bracket_subspaces(&whole, &whole);
    let mut span = derived.clone();
    let mut chosen: Vec<(Rational, Vector)> = Vec::new();
    for (w, vecs) in &eigen {
        for v in vecs {
            if !span.contains(v) {
                span = span.sum(&Subspace::span(n, [v.clone()]));
                chosen.push((w.clone(), v.clone()));
            }
        }
    }
    let (x_eigenvalue, x) = chosen.first().cloned().ok_or_else(|| Error::Invalid("[n, n] is the whole algebra".into()))?;
    if num_traits::Zero::is_zero(&x_eigenvalue) {
        return Err(Error::Check("no eigenvector with nonzero eigenvalue completes [n, n]".into()));
    }
    let h = Subspace::span(n, chosen[1..].iter().map(|(_, v)| v.clone()).chain(derived.basis().iter().cloned()));

    let reduced = h.reduce(&x);
    let lead = reduced.iter().find(|c| !c.is_zero()).expect("X is outside h");
    let x = linalg::scale_vector(&lead.inv()?, &x);

    check_ideal_data(mu, &x, &h)?;
    let mut cols = Vec::with_capacity(h.dim());
    for b in h.basis() {
        let image = d.apply(b)?;
        cols.push(h.coordinates(&image).ok_or_else(|| Error::Check("D does not preserve h".into()))?);
    }
    let d_h = LinearMap::from_columns(&cols)?;
    if h.dim() > 0 && !d_h.is_semisimple()? {
        return Err(Error::Check("D restricted to h is not semisimple".into()));
    }
    Ok(PipelineData { x, x_eigenvalue, h, d_h })
}
