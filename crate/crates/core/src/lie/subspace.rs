use crate::linalg::{self, is_zero_vector, scale_vector, Vector};
use crate::scalar::{Rational, Scalar, Symbols};

/// Subspace of `F^n` held as a reduced row echelon basis, so that two
/// subspaces are equal exactly when their bases are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace::from_indices(ambient, 0..ambient)
    }

    /// Span of the given standard basis vectors (0-based indices).
    pub fn from_indices(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Subspace::span(ambient, indices.into_iter().map(|i| linalg::basis_vector(ambient, i)))
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut rows: Vec<Vector> = vectors.into_iter().filter(|v| !is_zero_vector(v)).collect();
        debug_assert!(rows.iter().all(|v| v.len() == ambient));
        let pivots = linalg::rref(&mut rows, ambient);
        Subspace { ambient, basis: rows, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// `v` minus its echelon reduction against the basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -&r[p];
                linalg::axpy(&mut r, &f, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Vector with the given coordinates in the echelon basis.
    pub fn combine(&self, coords: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            linalg::axpy(&mut out, c, b);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Indices of standard basis vectors when the subspace is coordinate-aligned.
    pub fn as_indices(&self) -> Option<Vec<usize>> {
        let aligned = self
            .basis
            .iter()
            .zip(&self.pivots)
            .all(|(row, &p)| row.iter().enumerate().all(|(i, x)| if i == p { x.is_one() } else { x.is_zero() }));
        aligned.then(|| self.pivots.clone())
    }

    pub fn format(&self, symbols: &Symbols) -> String {
        if let Some(idx) = self.as_indices() {
            let names: Vec<String> = idx.iter().map(|i| format!("e{}", i + 1)).collect();
            return format!("<{}>", names.join(", "));
        }
        let vecs: Vec<String> = self.basis.iter().map(|v| linalg::format_vector(v, symbols)).collect();
        format!("<{}>", vecs.join(", "))
    }
}

/// Direct-sum decomposition of a space into weight pieces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grading {
    pieces: Vec<(Rational, Subspace)>,
}

impl Grading {
    /// Pieces must have distinct weights and be independent; this is checked
    /// by the constructors in the `lie` module.
    pub(crate) fn new(mut pieces: Vec<(Rational, Subspace)>) -> Self {
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        Grading { pieces }
    }

    pub fn pieces(&self) -> &[(Rational, Subspace)] {
        &self.pieces
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.pieces.iter().map(|(w, _)| w.clone()).collect()
    }

    pub fn piece(&self, weight: &Rational) -> Option<&Subspace> {
        self.pieces.iter().find(|(w, _)| w == weight).map(|(_, s)| s)
    }

    /// Basis adapted to the grading, pieces in ascending weight order.
    pub fn adapted_basis(&self) -> Vec<(Rational, Vector)> {
        self.pieces.iter().flat_map(|(w, s)| s.basis().iter().map(move |v| (w.clone(), v.clone()))).collect()
    }
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_integer_vector(v: &[Scalar]) -> Option<Vector> {
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};
    let rats: Option<Vec<Rational>> = v.iter().map(Scalar::as_rational).collect();
    let rats = rats?;
    let lcm = rats.iter().fold(num_bigint::BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<num_bigint::BigInt> = rats.iter().map(|r| (r * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Some(v.to_vec());
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| x.signum()).unwrap_or_else(num_bigint::BigInt::one);
    let factor = Rational::new(lcm * sign, g);
    Some(scale_vector(&Scalar::from_rational(factor), v))
}
