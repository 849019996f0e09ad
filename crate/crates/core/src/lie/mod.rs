//! Finite-dimensional Lie algebras given by structure constants.
//!
//! Indices are 0-based throughout the API; basis vector `e{i+1}` in printed
//! output corresponds to index `i`.

pub mod families;
mod subspace;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, is_zero_vector, LinearMap, Vector};
use crate::scalar::{Scalar, Symbols};

pub use subspace::{primitive_integer_vector, Grading, Subspace};

/// Antisymmetric bilinear table `μ(e_i, e_j) = Σ_k c_ij^k e_k`, stored for
/// `i < j` only and without zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureTable {
    dim: usize,
    entries: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>>,
}

impl StructureTable {
    pub fn new(dim: usize) -> Self {
        StructureTable { dim, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::Dimension(format!("basis index out of range for dimension {}", self.dim)));
        }
        if i == j {
            return Err(Error::Invalid(format!("bracket [e{0}, e{0}] must vanish", i + 1)));
        }
        Ok(())
    }

    /// Sets `μ(e_i, e_j)`, replacing any previous value. `i > j` is stored
    /// as the negated `(j, i)` entry.
    pub fn set(&mut self, i: usize, j: usize, value: &[Scalar]) -> Result<()> {
        self.check_pair(i, j)?;
        if value.len() != self.dim {
            return Err(Error::Dimension(format!("bracket value has length {}, expected {}", value.len(), self.dim)));
        }
        let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
        let coeffs: BTreeMap<usize, Scalar> = value
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, if neg { -c } else { c.clone() }))
            .collect();
        if coeffs.is_empty() {
            self.entries.remove(&(a, b));
        } else {
            self.entries.insert((a, b), coeffs);
        }
        Ok(())
    }

    /// Sets a single structure constant `c_ij^k`.
    pub fn set_coefficient(&mut self, i: usize, j: usize, k: usize, c: Scalar) -> Result<()> {
        self.check_pair(i, j)?;
        if k >= self.dim {
            return Err(Error::Dimension(format!("basis index out of range for dimension {}", self.dim)));
        }
        let (a, b, c) = if i < j { (i, j, c) } else { (j, i, -c) };
        let slot = self.entries.entry((a, b)).or_default();
        if c.is_zero() {
            slot.remove(&k);
        } else {
            slot.insert(k, c);
        }
        if slot.is_empty() {
            self.entries.remove(&(a, b));
        }
        Ok(())
    }

    /// Dense `μ(e_i, e_j)`.
    pub fn get(&self, i: usize, j: usize) -> Vector {
        let mut out = linalg::zero_vector(self.dim);
        if i == j {
            return out;
        }
        let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
        if let Some(coeffs) = self.entries.get(&(a, b)) {
            for (&k, c) in coeffs {
                out[k] = if neg { -c } else { c.clone() };
            }
        }
        out
    }

    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        let (a, b, neg) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.entries.get(&(a, b)).and_then(|m| m.get(&k)) {
            Some(c) if neg => -c,
            Some(c) => c.clone(),
            None => Scalar::zero(),
        }
    }

    /// Nonzero entries `((i, j), {k: c})` with `i < j`, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &BTreeMap<usize, Scalar>)> {
        self.entries.iter()
    }

    pub fn num_nonzero_pairs(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `μ(x, y)` for arbitrary vectors.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(self.dim);
        for (&(i, j), coeffs) in &self.entries {
            let w = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if w.is_zero() {
                continue;
            }
            for (&k, c) in coeffs {
                out[k] = &out[k] + &(&w * c);
            }
        }
        out
    }

    /// `μ(v, e_k)`.
    pub fn apply_basis_right(&self, v: &[Scalar], k: usize) -> Vector {
        let mut out = linalg::zero_vector(self.dim);
        for (l, vl) in v.iter().enumerate() {
            if vl.is_zero() || l == k {
                continue;
            }
            let (a, b, neg) = if l < k { (l, k, false) } else { (k, l, true) };
            if let Some(coeffs) = self.entries.get(&(a, b)) {
                for (&m, c) in coeffs {
                    let term = vl * c;
                    out[m] = if neg { &out[m] - &term } else { &out[m] + &term };
                }
            }
        }
        out
    }

    pub fn add(&self, other: &StructureTable) -> Result<StructureTable> {
        self.combine(other, &Scalar::one())
    }

    /// `self + c·other`.
    pub fn combine(&self, other: &StructureTable, c: &Scalar) -> Result<StructureTable> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!("cannot add tables of dimension {} and {}", self.dim, other.dim)));
        }
        let mut out = self.clone();
        for (&(i, j), coeffs) in &other.entries {
            for (&k, x) in coeffs {
                let v = &out.coefficient(i, j, k) + &(c * x);
                out.set_coefficient(i, j, k, v)?;
            }
        }
        Ok(out)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<StructureTable> {
        let mut out = StructureTable::new(self.dim);
        for (&(i, j), coeffs) in &self.entries {
            for (&k, c) in coeffs {
                out.set_coefficient(i, j, k, f(c)?)?;
            }
        }
        Ok(out)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.entries.values().flat_map(|m| m.values()).any(|c| c.contains_var(var))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.entries.values().flat_map(|m| m.values()).filter_map(Scalar::max_var).max()
    }

    /// Builds a table from a closure evaluated on every pair `i < j` in parallel.
    pub fn from_pairs(dim: usize, f: impl Fn(usize, usize) -> Result<Vector> + Sync) -> Result<StructureTable> {
        let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
        let values: Vec<Vector> = pairs.par_iter().map(|&(i, j)| f(i, j)).collect::<Result<_>>()?;
        let mut out = StructureTable::new(dim);
        for ((i, j), v) in pairs.into_iter().zip(values) {
            out.set(i, j, &v)?;
        }
        Ok(out)
    }

    /// One line per nonzero bracket, e.g. `[e1, e2] = e3`.
    pub fn format_lines(&self, symbols: &Symbols) -> Vec<String> {
        self.entries
            .keys()
            .map(|&(i, j)| format!("[e{}, e{}] = {}", i + 1, j + 1, linalg::format_vector(&self.get(i, j), symbols)))
            .collect()
    }
}

/// Nonzero value of the Jacobi expression on a basis triple `i < j < k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobiResidual {
    pub triple: (usize, usize, usize),
    pub residual: Vector,
}

/// Nonzero value of `D[x,y] - [Dx,y] - [x,Dy]` on a basis pair `i < j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairResidual {
    pub pair: (usize, usize),
    pub residual: Vector,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesKind {
    LowerCentral,
    Derived,
}

/// Lie algebra over ℚ(params) presented by structure constants. The Jacobi
/// identity is not enforced on construction; see [`LieAlgebra::jacobi_residuals`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    pub name: String,
    symbols: Symbols,
    table: StructureTable,
}

impl LieAlgebra {
    pub fn new(name: impl Into<String>, symbols: Symbols, table: StructureTable) -> Self {
        LieAlgebra { name: name.into(), symbols, table }
    }

    pub fn abelian(name: impl Into<String>, dim: usize) -> Self {
        LieAlgebra::new(name, Symbols::default(), StructureTable::new(dim))
    }

    /// Builds from integer constants `(i, j, k, c)` meaning `[e_i, e_j] += c e_k`,
    /// with 1-based indices.
    pub fn from_int_brackets(name: impl Into<String>, dim: usize, brackets: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let mut table = StructureTable::new(dim);
        for &(i, j, k, c) in brackets {
            if i == 0 || j == 0 || k == 0 {
                return Err(Error::Invalid("basis indices are 1-based".into()));
            }
            let v = &table.coefficient(i - 1, j - 1, k - 1) + &Scalar::from_int(c);
            table.set_coefficient(i - 1, j - 1, k - 1, v)?;
        }
        Ok(LieAlgebra::new(name, Symbols::default(), table))
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn into_table(self) -> StructureTable {
        self.table
    }

    /// Equality of structure constants and parameters, ignoring the name.
    pub fn same_brackets(&self, other: &LieAlgebra) -> bool {
        self.table == other.table && self.symbols == other.symbols
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.table.apply(x, y))
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension(format!("vector has length {}, expected {}", v.len(), self.dim())));
        }
        Ok(())
    }

    fn check_map(&self, m: &LinearMap, what: &str) -> Result<()> {
        let n = self.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::Dimension(format!("{what} is {}x{}, expected {n}x{n}", m.rows(), m.cols())));
        }
        Ok(())
    }

    /// Jacobi expression on one basis triple.
    pub fn jacobi_on(&self, i: usize, j: usize, k: usize) -> Vector {
        let t = &self.table;
        let a = t.apply_basis_right(&t.get(i, j), k);
        let b = t.apply_basis_right(&t.get(j, k), i);
        let c = t.apply_basis_right(&t.get(k, i), j);
        linalg::add_vectors(&linalg::add_vectors(&a, &b), &c)
    }

    pub fn num_triples(&self) -> usize {
        let n = self.dim();
        if n < 3 {
            0
        } else {
            n * (n - 1) * (n - 2) / 6
        }
    }

    /// All triples `i < j < k` with nonzero Jacobi expression, sorted.
    pub fn jacobi_residuals(&self) -> Vec<JacobiResidual> {
        let n = self.dim();
        let triples: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k)))).collect();
        triples
            .into_par_iter()
            .filter_map(|(i, j, k)| {
                let r = self.jacobi_on(i, j, k);
                (!is_zero_vector(&r)).then_some(JacobiResidual { triple: (i, j, k), residual: r })
            })
            .collect()
    }

    pub fn is_lie(&self) -> bool {
        self.jacobi_residuals().is_empty()
    }

    /// `g·μ(x, y) = g μ(g⁻¹x, g⁻¹y)`.
    pub fn gl_action(&self, g: &LinearMap) -> Result<LieAlgebra> {
        self.check_map(g, "transformation")?;
        let ginv = g.inverse()?;
        self.gl_action_with_inverse(g, &ginv)
    }

    /// As [`gl_action`](Self::gl_action) with a precomputed inverse.
    pub fn gl_action_with_inverse(&self, g: &LinearMap, ginv: &LinearMap) -> Result<LieAlgebra> {
        self.check_map(g, "transformation")?;
        self.check_map(ginv, "inverse")?;
        let cols: Vec<Vector> = (0..self.dim()).map(|j| ginv.column(j)).collect();
        let table = StructureTable::from_pairs(self.dim(), |i, j| g.apply(&self.table.apply(&cols[i], &cols[j])))?;
        Ok(LieAlgebra::new(self.name.clone(), self.symbols.clone(), table))
    }

    /// `[A, B]` as a subspace.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let products: Vec<Vector> =
            a.basis().iter().flat_map(|x| b.basis().iter().map(move |y| self.table.apply(x, y))).collect();
        Subspace::span(self.dim(), products)
    }

    /// Pairs `(i, b)` such that `[e_i, h_b]` leaves `h`, where `h_b` is the
    /// `b`-th echelon basis vector.
    pub fn ideal_violations(&self, h: &Subspace) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for (b, v) in h.basis().iter().enumerate() {
            for i in 0..n {
                let w = linalg::scale_vector(&-Scalar::one(), &self.table.apply_basis_right(v, i));
                if !h.contains(&w) {
                    out.push((i, b));
                }
            }
        }
        out
    }

    pub fn subspace_is_ideal(&self, h: &Subspace) -> bool {
        h.ambient() == self.dim() && self.ideal_violations(h).is_empty()
    }

    pub fn is_subalgebra(&self, h: &Subspace) -> bool {
        self.bracket_subspaces(h, h).is_subspace_of(h)
    }

    /// Nonzero `D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]` for `i < j`.
    pub fn derivation_residuals(&self, d: &LinearMap) -> Result<Vec<PairResidual>> {
        self.check_map(d, "map")?;
        let n = self.dim();
        let images: Vec<Vector> = (0..n).map(|j| d.column(j)).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let out: Vec<PairResidual> = pairs
            .into_par_iter()
            .map(|(i, j)| -> Result<Option<PairResidual>> {
                let lhs = d.apply(&self.table.get(i, j))?;
                let a = self.table.apply(&images[i], &linalg::basis_vector(n, j));
                let b = self.table.apply(&linalg::basis_vector(n, i), &images[j]);
                let r = linalg::sub_vectors(&linalg::sub_vectors(&lhs, &a), &b);
                Ok((!is_zero_vector(&r)).then_some(PairResidual { pair: (i, j), residual: r }))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(out)
    }

    pub fn is_derivation(&self, d: &LinearMap) -> Result<bool> {
        Ok(self.derivation_residuals(d)?.is_empty())
    }

    /// Leibniz rule as linear equations in the `n²` entries of `D`, indexed
    /// row-major (`D[a][b]` at `a·n + b`).
    pub fn derivation_space_equations(&self) -> Vec<Vector> {
        let n = self.dim();
        let idx = |a: usize, b: usize| a * n + b;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let mut row = linalg::zero_vector(n * n);
                    for (l, c) in self.table.get(i, j).iter().enumerate() {
                        if !c.is_zero() {
                            row[idx(k, l)] = &row[idx(k, l)] + c;
                        }
                    }
                    for a in 0..n {
                        let c = self.table.coefficient(a, j, k);
                        if !c.is_zero() {
                            row[idx(a, i)] = &row[idx(a, i)] - &c;
                        }
                        let c = self.table.coefficient(i, a, k);
                        if !c.is_zero() {
                            row[idx(a, j)] = &row[idx(a, j)] - &c;
                        }
                    }
                    if !is_zero_vector(&row) {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    /// Basis of `Der(g)`.
    pub fn derivation_space(&self) -> Vec<LinearMap> {
        let n = self.dim();
        linalg::kernel_of_rows(self.derivation_space_equations(), n * n)
            .into_iter()
            .map(|v| LinearMap::from_rows(v.chunks(n).map(<[Scalar]>::to_vec).collect()).expect("square"))
            .collect()
    }

    /// Basis of the diagonal derivations as weight vectors `w` with
    /// `w_i + w_j = w_k` whenever `c_ij^k ≠ 0`, each scaled to a primitive
    /// integer vector. Parametric constants count as nonzero.
    pub fn diagonal_derivations(&self) -> Vec<Vector> {
        let n = self.dim();
        let mut rows = Vec::new();
        for (&(i, j), coeffs) in self.table.iter() {
            for &k in coeffs.keys() {
                let mut row = linalg::zero_vector(n);
                row[i] = &row[i] + &Scalar::one();
                row[j] = &row[j] + &Scalar::one();
                row[k] = &row[k] - &Scalar::one();
                rows.push(row);
            }
        }
        linalg::kernel_of_rows(rows, n)
            .into_iter()
            .map(|v| primitive_integer_vector(&v).unwrap_or(v))
            .collect()
    }

    /// Terms of the lower central or derived series, starting with the whole
    /// algebra and ending with the first repeated term.
    pub fn series(&self, kind: SeriesKind) -> Vec<Subspace> {
        let whole = Subspace::whole(self.dim());
        let mut out = vec![whole.clone()];
        loop {
            let last = out.last().expect("nonempty");
            let next = match kind {
                SeriesKind::LowerCentral => self.bracket_subspaces(&whole, last),
                SeriesKind::Derived => self.bracket_subspaces(last, last),
            };
            if &next == last {
                return out;
            }
            out.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.series(SeriesKind::LowerCentral).last().is_some_and(Subspace::is_zero)
    }

    pub fn is_solvable(&self) -> bool {
        self.series(SeriesKind::Derived).last().is_some_and(Subspace::is_zero)
    }

    /// `ad x` as a matrix: column `j` is `[x, e_j]`.
    pub fn ad(&self, x: &[Scalar]) -> Result<LinearMap> {
        self.check_vector(x)?;
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.table.apply(x, &linalg::basis_vector(n, j))).collect();
        LinearMap::from_columns(&cols)
    }

    /// Eigenspace grading of a semisimple derivation with rational eigenvalues.
    pub fn eigen_grading(&self, d: &LinearMap) -> Result<Grading> {
        let residuals = self.derivation_residuals(d)?;
        if let Some(r) = residuals.first() {
            return Err(Error::Check(format!(
                "map is not a derivation: Leibniz rule fails on (e{}, e{})",
                r.pair.0 + 1,
                r.pair.1 + 1
            )));
        }
        let pieces: Vec<_> =
            d.rational_eigenvalues()?.into_iter().map(|(w, vs)| (w, Subspace::span(self.dim(), vs))).collect();
        let grading = Grading::new(pieces);
        self.check_grading(&grading)?;
        Ok(grading)
    }

    /// Checks `[g_a, g_b] ⊆ g_{a+b}` for every pair of pieces.
    pub fn check_grading(&self, grading: &Grading) -> Result<()> {
        let pieces = grading.pieces();
        for (a, (wa, sa)) in pieces.iter().enumerate() {
            for (wb, sb) in &pieces[a..] {
                let br = self.bracket_subspaces(sa, sb);
                if br.is_zero() {
                    continue;
                }
                let w = wa + wb;
                let ok = grading.piece(&w).is_some_and(|target| br.is_subspace_of(target));
                if !ok {
                    return Err(Error::Check(format!("grading is not compatible: [g_{wa}, g_{wb}] leaves g_{w}")));
                }
            }
        }
        Ok(())
    }

    /// Structure constants of the subalgebra `h` in its echelon basis.
    pub fn restrict(&self, h: &Subspace) -> Result<LieAlgebra> {
        if h.ambient() != self.dim() {
            return Err(Error::Dimension(format!("subspace of F^{} in algebra of dimension {}", h.ambient(), self.dim())));
        }
        let basis = h.basis();
        let m = basis.len();
        let table = StructureTable::from_pairs(m, |p, q| {
            let z = self.table.apply(&basis[p], &basis[q]);
            h.coordinates(&z).ok_or_else(|| {
                Error::Check(format!("subspace is not closed under the bracket of basis vectors {} and {}", p + 1, q + 1))
            })
        })?;
        Ok(LieAlgebra::new(format!("{}|h", self.name), self.symbols.clone(), table))
    }

    /// Substitutes a value for one variable in every structure constant.
    pub fn substitute(&self, var: usize, value: &Scalar) -> Result<LieAlgebra> {
        let table = self.table.map_coefficients(|c| c.substitute(var, value, &self.symbols))?;
        Ok(LieAlgebra::new(self.name.clone(), self.symbols.clone(), table))
    }

    pub fn format_brackets(&self) -> Vec<String> {
        self.table.format_lines(&self.symbols)
    }
}
