//! Dense exact linear algebra over [`Scalar`].
//!
//! Matrices follow the column-image convention: column `j` holds the image of
//! the basis vector `e_j`, so `(M v)_i = Σ_j M[i][j] v_j`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, Symbols, T};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `v += c * w`
pub fn axpy(v: &mut [Scalar], c: &Scalar, w: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (x, y) in v.iter_mut().zip(w) {
        if !y.is_zero() {
            *x = &*x + &(c * y);
        }
    }
}

/// Formats `Σ c_i e_{i+1}` using the coefficient grammar.
pub fn format_vector(v: &[Scalar], symbols: &Symbols) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let text = c.format(symbols);
        let term = if c.is_one() {
            format!("e{}", i + 1)
        } else if text == "-1" {
            format!("-e{}", i + 1)
        } else if is_atomic(&text) {
            format!("{text}*e{}", i + 1)
        } else {
            format!("({text})*e{}", i + 1)
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn is_atomic(text: &str) -> bool {
    let body = text.strip_prefix('-').unwrap_or(text);
    !body.contains([' ', '/', '('])
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot
/// columns. The pivot for each column is the first row (in row order) with a
/// nonzero entry, and pivots are scaled to 1.
pub fn rref(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        if !inv.is_one() {
            rows[r] = scale_vector(&inv, &rows[r]);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = -&row[col];
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right kernel of the matrix given by `rows`: one vector per
/// free column (ascending), with that free variable set to 1.
pub fn kernel_of_rows(mut rows: Vec<Vector>, ncols: usize) -> Vec<Vector> {
    let pivots = rref(&mut rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = zero_vector(ncols);
        v[free] = Scalar::one();
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = -&row[free];
        }
        out.push(v);
    }
    out
}

/// Solves `A x = b`; `None` if inconsistent. The particular solution sets
/// free variables to zero.
pub fn solve_affine(a: &LinearMap, b: &[Scalar]) -> Result<Option<(Vector, Vec<Vector>)>> {
    if b.len() != a.rows {
        return Err(Error::Dimension(format!("right-hand side has length {}, expected {}", b.len(), a.rows)));
    }
    let n = a.cols;
    let mut rows: Vec<Vector> = (0..a.rows)
        .map(|i| {
            let mut r = a.row(i);
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = zero_vector(n);
    for (row, &pc) in rows.iter().zip(&pivots) {
        x[pc] = row[n].clone();
    }
    let kernel = kernel_of_rows((0..a.rows).map(|i| a.row(i)).collect(), n);
    Ok(Some((x, kernel)))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl LinearMap {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinearMap { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = LinearMap::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diagonal(diag: &[Scalar]) -> Self {
        let n = diag.len();
        let mut m = LinearMap::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        Ok(LinearMap { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        let mut m = LinearMap::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.entries.iter()
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.entries.iter().any(|e| e.contains_var(var))
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for a {}x{} map", v.len(), self.rows, self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn matmul(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols: Result<Vec<Vector>> = (0..other.cols).map(|j| self.apply(&other.column(j))).collect();
        let mut out = LinearMap::from_columns(&cols?)?;
        out.rows = self.rows;
        Ok(out)
    }

    fn zip_with(&self, other: &LinearMap, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<LinearMap> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix shapes differ".into()));
        }
        Ok(LinearMap {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| c * x).collect() }
    }

    pub fn map_entries(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<LinearMap> {
        let entries: Result<Vec<Scalar>> = self.entries.iter().map(f).collect();
        Ok(LinearMap { rows: self.rows, cols: self.cols, entries: entries? })
    }

    pub fn transpose(&self) -> LinearMap {
        let mut m = LinearMap::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn pow(&self, k: u32) -> Result<LinearMap> {
        self.require_square()?;
        let mut acc = LinearMap::identity(self.rows);
        for _ in 0..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!("expected a square matrix, got {}x{}", self.rows, self.cols)))
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        rref(&mut rows, self.cols).len()
    }

    /// Echelonized basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vector> {
        kernel_of_rows(self.to_rows(), self.cols)
    }

    pub fn determinant(&self) -> Result<Scalar> {
        self.require_square()?;
        let n = self.rows;
        let mut rows = self.to_rows();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !rows[i][col].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            let pivot = rows[col][col].clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            let pivot_row = rows[col].clone();
            for row in rows.iter_mut().skip(col + 1) {
                if !row[col].is_zero() {
                    let f = -&(&row[col] * &inv);
                    axpy(row, &f, &pivot_row);
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<LinearMap> {
        self.require_square()?;
        let n = self.rows;
        let mut rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend(basis_vector(n, i));
                r
            })
            .collect();
        let pivots = rref(&mut rows, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        LinearMap::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Monic least-degree annihilating polynomial, found as the first linear
    /// dependence among `I, A, A², …`.
    pub fn minimal_polynomial(&self) -> Result<UniPoly> {
        self.require_square()?;
        if self.contains_var(T) {
            return Err(Error::Unsupported("minimal polynomial of a matrix depending on t".into()));
        }
        let n = self.rows;
        let mut powers: Vec<Vector> = vec![LinearMap::identity(n).entries];
        let mut current = LinearMap::identity(n);
        for k in 1..=n {
            current = current.matmul(self)?;
            let columns = LinearMap::from_columns(&powers)?;
            if let Some((coeffs, _)) = solve_affine(&columns, &current.entries)? {
                let mut c: Vec<Scalar> = coeffs.iter().map(|x| -x).collect();
                c.push(Scalar::one());
                debug_assert_eq!(c.len(), k + 1);
                return Ok(UniPoly::new(c));
            }
            powers.push(current.entries.clone());
        }
        unreachable!("Cayley–Hamilton bounds the degree by n")
    }

    /// Diagonalizable over an algebraic closure, i.e. squarefree minimal polynomial.
    pub fn is_semisimple(&self) -> Result<bool> {
        let m = self.minimal_polynomial()?;
        Ok(m.gcd(&m.derivative()).degree() == Some(0))
    }

    pub fn is_nilpotent_matrix(&self) -> Result<bool> {
        self.require_square()?;
        Ok(self.pow(self.rows as u32)?.is_zero())
    }

    /// Distinct eigenvalues with eigenspace bases, for semisimple matrices
    /// whose minimal polynomial splits over ℚ.
    pub fn rational_eigenvalues(&self) -> Result<Vec<(Rational, Vec<Vector>)>> {
        let m = self.minimal_polynomial()?;
        if m.gcd(&m.derivative()).degree() != Some(0) {
            return Err(Error::Unsupported("eigenvalue grading requires a semisimple matrix".into()));
        }
        let roots = m.rational_roots()?;
        if roots.len() != m.degree().unwrap_or(0) {
            return Err(Error::Unsupported(format!(
                "minimal polynomial has {} rational roots but degree {}; eigenvalues are not all rational",
                roots.len(),
                m.degree().unwrap_or(0)
            )));
        }
        let n = self.rows;
        let mut out = Vec::new();
        for r in roots {
            let shifted = self.sub(&LinearMap::identity(n).scale(&Scalar::from_rational(r.clone())))?;
            out.push((r, shifted.kernel()));
        }
        Ok(out)
    }

    pub fn format(&self, symbols: &Symbols) -> String {
        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).format(symbols)).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        cells
            .iter()
            .map(|row| row.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(&Symbols::default()))
    }
}

/// Univariate polynomial in a fresh variable `x` with coefficients in
/// ℚ(params), lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut p = UniPoly::new(vec![Scalar::one()]);
        for r in roots {
            p = p.mul(&UniPoly::new(vec![Scalar::from_rational(-r.clone()), Scalar::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::from_int(k as i64)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return UniPoly::new(Vec::new());
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }

    fn rem(&self, d: &UniPoly) -> UniPoly {
        let dd = d.degree().expect("nonzero divisor");
        let lead_inv = d.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let k = r.len() - 1;
            let f = &r[k] * &lead_inv;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k - dd + i] = &r[k - dd + i] - &(&f * c);
            }
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    pub fn monic(&self) -> UniPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero");
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Monic gcd by Euclid over the coefficient field.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while b.degree().is_some() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval_matrix(&self, a: &LinearMap) -> Result<LinearMap> {
        let n = a.rows();
        let mut acc = LinearMap::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.matmul(a)?.add(&LinearMap::identity(n).scale(c))?;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Distinct rational roots, ascending. Errors if a coefficient depends on
    /// a parameter.
    pub fn rational_roots(&self) -> Result<Vec<Rational>> {
        let rat: Option<Vec<Rational>> = self.coeffs.iter().map(Scalar::as_rational).collect();
        let rat = rat.ok_or_else(|| Error::Unsupported("parameter-dependent eigenvalues".into()))?;
        let lcm = rat.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = rat.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let mut roots = Vec::new();
        if ints.first().is_some_and(Zero::is_zero) {
            roots.push(Rational::zero());
            while ints.first().is_some_and(Zero::is_zero) {
                ints.remove(0);
            }
        }
        if ints.len() > 1 {
            let a0 = ints[0].abs();
            let an = ints.last().expect("nonempty").abs();
            let evaluate = |r: &Rational| {
                ints.iter().rev().fold(Rational::zero(), |acc, c| acc * r + Rational::from_integer(c.clone()))
            };
            for p in divisors(&a0)? {
                for q in divisors(&an)? {
                    for sign in [1, -1] {
                        let r = Rational::new(BigInt::from(sign) * p.clone(), q.clone());
                        if !roots.contains(&r) && evaluate(&r).is_zero() {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        Ok(roots)
    }

    pub fn format(&self) -> String {
        let syms = Symbols::default();
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let x = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            let cs = c.format(&syms);
            parts.push(match (x.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => x,
                (false, false) if cs.contains(' ') => format!("({cs})*{x}"),
                (false, false) => format!("{cs}*{x}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let small = n
        .to_u64()
        .filter(|&v| v <= 1 << 40)
        .ok_or_else(|| Error::Unsupported("coefficients too large for rational root search".into()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d != small / d {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    Ok(out)
}
