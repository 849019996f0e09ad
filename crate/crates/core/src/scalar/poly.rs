//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are identified by index: index 0 is the deformation variable `t`,
//! indices `1..` are the declared parameters in declaration order. Exponent
//! vectors are stored with trailing zeros trimmed, so a polynomial does not
//! need to know how many variables are in scope.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Rational, Symbols};

/// Exponent vector ordered by graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = exp;
        Monomial::from_exponents(v)
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let v = (0..other.0.len()).map(|i| other.exp(i) - self.exp(i)).collect();
        Monomial::from_exponents(v)
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        Monomial::from_exponents((0..n).map(|i| self.0[i].min(other.0[i])).collect())
    }

    fn with_exp(&self, var: usize, exp: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= var {
            v.resize(var + 1, 0);
        }
        v[var] = exp;
        Monomial::from_exponents(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            (0..n)
                .map(|i| self.exp(i).cmp(&other.exp(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in ℚ[t, p₁, …]; no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial(c, Monomial::one())
    }

    pub fn var(index: usize) -> Self {
        Poly::monomial(Rational::one(), Monomial::var(index, 1))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.get(&Monomial::one()).cloned()
        } else {
            None
        }
    }

    /// Leading term under graded lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so that the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Highest variable index occurring with positive exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.0.len().checked_sub(1)).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Largest `k` with `x_var^k` dividing the polynomial (0 for zero).
    pub fn min_exp_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Coefficients with respect to `x_var`, lowest power first.
    pub fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.exp(var) as usize;
            out[k].add_term(m.with_exp(var, 0), c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn from_univariate(coeffs: &[Poly], var: usize) -> Poly {
        let mut p = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                p.add_term(m.with_exp(var, m.exp(var) + k as u32), a.clone());
            }
        }
        p
    }

    /// Divides by `t^k` style monomial factors; caller guarantees divisibility.
    pub fn div_monomial(&self, mono: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (mono.quotient_of(m), c.clone())).collect() }
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if divisor.is_monomial() {
            if self.terms.keys().all(|m| lm.divides(m)) {
                return Some(self.div_monomial(lm).scale(&lc.recip()));
            }
            return None;
        }
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) || m < lm {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c * &lc_inv;
            rem = &rem - &divisor.mul_monomial(&qc, &qm);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Renumbers variables: variable `i` becomes `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut v = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let j = map[i];
                    if v.len() <= j {
                        v.resize(j + 1, 0);
                    }
                    v[j] += e;
                }
            }
            (Monomial::from_exponents(v), c.clone())
        }))
    }

    /// Evaluates variable `var` at a rational value.
    pub fn eval_var(&self, var: usize, value: &Rational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exp(var);
            let factor = pow_rational(value, e);
            (m.with_exp(var, 0), c * factor)
        }))
    }

    /// Least common multiple of coefficient denominators, used to clear fractions.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn format(&self, symbols: &Symbols) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = format_monomial(m, symbols);
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&abs.to_string()),
                (false, false) => {
                    let _ = write!(out, "{abs}*{mono}");
                }
            }
        }
        out
    }
}

fn pow_rational(value: &Rational, e: u32) -> Rational {
    num_traits::pow(value.clone(), e as usize)
}

fn format_monomial(m: &Monomial, symbols: &Symbols) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(symbols.name(i).to_string()),
            _ => parts.push(format!("{}^{}", symbols.name(i), e)),
        }
    }
    parts.join("*")
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) =
            if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// gcd
// ---------------------------------------------------------------------------

/// Monic greatest common divisor over ℚ.
///
/// Recursive content/primitive-part scheme: the polynomials are viewed as
/// univariate in their highest variable with coefficients in the ring of the
/// lower variables, and a primitive pseudo-remainder sequence runs in that
/// view. The univariate base case is Euclid over ℚ.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    if provably_coprime(a, b) {
        return Poly::one();
    }
    let va = a.max_var().expect("non-constant");
    let vb = b.max_var().expect("non-constant");
    let v = va.max(vb);
    if !a.contains_var(v) {
        return gcd(a, &content_in(b, v));
    }
    if !b.contains_var(v) {
        return gcd(&content_in(a, v), b);
    }

    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let (ca, pa) = primitive(&ua);
    let (cb, pb) = primitive(&ub);
    let c = gcd(&ca, &cb);
    let g = univariate_prs_gcd(pa, pb);
    let g = Poly::from_univariate(&g, v);
    (&c * &g).monic()
}

/// Specialization test: for each variable `v` shared by `a` and `b`, the
/// other variables are fixed at integers keeping both leading coefficients in
/// `v` nonzero. A constant gcd of the images bounds `deg_v gcd(a, b)` by 0.
/// `false` means "unknown".
fn provably_coprime(a: &Poly, b: &Poly) -> bool {
    let nvars = a.max_var().max(b.max_var()).map_or(0, |v| v + 1);
    let shared: Vec<usize> = (0..nvars).filter(|&v| a.contains_var(v) && b.contains_var(v)).collect();
    if shared.is_empty() {
        return false;
    }
    const POINTS: [i64; 4] = [2, 3, -5, 7];
    for &v in &shared {
        let mut settled = false;
        for shift in 0..POINTS.len() {
            let values: Vec<(usize, Rational)> = (0..nvars)
                .filter(|&w| w != v)
                .enumerate()
                .map(|(k, w)| (w, Rational::from_integer(BigInt::from(POINTS[(k + shift) % POINTS.len()] + shift as i64))))
                .collect();
            let image = |p: &Poly| values.iter().fold(p.clone(), |acc, (w, x)| acc.eval_var(*w, x));
            let (ia, ib) = (image(a), image(b));
            if ia.degree_in(v) != a.degree_in(v) || ib.degree_in(v) != b.degree_in(v) {
                continue;
            }
            let g = univariate_prs_gcd(ia.to_univariate(v), ib.to_univariate(v));
            if g.len() > 1 {
                return false;
            }
            settled = true;
            break;
        }
        if !settled {
            return false;
        }
    }
    true
}

fn monomial_gcd(mono: &Poly, p: &Poly) -> Poly {
    let (m, _) = mono.leading().expect("monomial");
    let mut g = m.clone();
    for (pm, _) in p.terms() {
        g = g.gcd(pm);
        if g.is_one() {
            break;
        }
    }
    Poly::monomial(Rational::one(), g)
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x_var`.
fn content_in(p: &Poly, var: usize) -> Poly {
    let coeffs = p.to_univariate(var);
    let mut g = Poly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Splits a univariate-view polynomial into content and primitive part.
/// When all coefficients are rational constants the content is the leading
/// coefficient, which makes the primitive part monic.
fn primitive(u: &[Poly]) -> (Poly, Vec<Poly>) {
    let nz: Vec<&Poly> = u.iter().filter(|c| !c.is_zero()).collect();
    if nz.is_empty() {
        return (Poly::zero(), Vec::new());
    }
    if nz.iter().all(|c| c.is_constant()) {
        let lc = u.last().expect("nonempty").leading_coeff();
        let inv = lc.recip();
        return (Poly::constant(lc), u.iter().map(|c| c.scale(&inv)).collect());
    }
    let mut g = Poly::zero();
    for c in &nz {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    if g.is_one() {
        return (g, u.to_vec());
    }
    let parts = u.iter().map(|c| c.div_exact(&g).expect("content divides coefficient")).collect();
    (g, parts)
}

/// Scales a univariate-view polynomial so its coefficients are coprime integers.
fn clear_numeric_content(u: Vec<Poly>) -> Vec<Poly> {
    use num_integer::Integer;
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in &u {
        for (_, q) in c.terms() {
            num = num.gcd(q.numer());
            den = den.lcm(q.denom());
        }
    }
    if num.is_zero() {
        return u;
    }
    let factor = Rational::new(den, num);
    if factor.is_one() {
        return u;
    }
    u.iter().map(|c| c.scale(&factor)).collect()
}

fn trim(u: &mut Vec<Poly>) {
    while u.last().is_some_and(Poly::is_zero) {
        u.pop();
    }
}

fn pseudo_remainder(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        trim(&mut r);
    }
    r
}

fn univariate_prs_gcd(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_empty() {
            return a;
        }
        if b.len() == 1 {
            return vec![Poly::one()];
        }
        let r = pseudo_remainder(&a, &b);
        if r.is_empty() {
            return primitive(&b).1;
        }
        let (_, pr) = primitive(&r);
        a = b;
        b = clear_numeric_content(pr);
    }
}
