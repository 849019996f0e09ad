//! Exact arithmetic in ℚ(t, p₁, …, p_k).
//!
//! A [`Scalar`] is a reduced fraction of two [`Poly`]s whose denominator is
//! monic under graded lex order. Because the normal form is unique, equality
//! of scalars is structural equality.

mod parse;
pub mod poly;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
pub use parse::parse_scalar;
pub use poly::{gcd, Monomial, Poly};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

/// Index of the reserved deformation variable.
pub const T: usize = 0;

/// Names of the variables in scope: `t` followed by the declared parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    params: Vec<String>,
}

impl Symbols {
    pub fn new<S: AsRef<str>>(params: &[S]) -> Result<Self> {
        let mut out = Vec::with_capacity(params.len());
        for p in params {
            let p = p.as_ref();
            if p == "t" {
                return Err(Error::Invalid("`t` is reserved and cannot be declared".into()));
            }
            if p.is_empty() || !p.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Invalid(format!("`{p}` is not a valid parameter name")));
            }
            if out.iter().any(|q: &String| q == p) {
                return Err(Error::Invalid(format!("parameter `{p}` declared twice")));
            }
            out.push(p.to_string());
        }
        Ok(Symbols { params: out })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn name(&self, index: usize) -> &str {
        if index == T {
            "t"
        } else {
            self.params.get(index - 1).map(String::as_str).unwrap_or("?")
        }
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        if name == "t" {
            Some(T)
        } else {
            self.params.iter().position(|p| p == name).map(|i| i + 1)
        }
    }

    /// Variable renumbering that embeds `self` into `target`.
    pub fn embedding_into(&self, target: &Symbols) -> Result<Vec<usize>> {
        let mut map = vec![T];
        for p in &self.params {
            let j = target
                .index(p)
                .ok_or_else(|| Error::Parameters(format!("parameter `{p}` is not declared in the target context")))?;
            map.push(j);
        }
        Ok(map)
    }
}

/// Element of ℚ(t, params) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::from_poly(Poly::constant(r))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    /// The deformation variable `t`.
    pub fn t() -> Self {
        Scalar::var(T)
    }

    pub fn var(index: usize) -> Self {
        Scalar::from_poly(Poly::var(index))
    }

    /// `t^e` for any integer `e`.
    pub fn t_pow(e: i64) -> Self {
        let m = Poly::monomial(Rational::one(), Monomial::var(T, e.unsigned_abs() as u32));
        if e >= 0 {
            Scalar::from_poly(m)
        } else {
            Scalar { num: Poly::one(), den: m }
        }
    }

    /// Builds `num/den` and reduces it to canonical form.
    pub fn fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value when the scalar contains no variables.
    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.num.contains_var(var) || self.den.contains_var(var)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().max(self.den.max_var())
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        Ok(Scalar::normalize(self.num.pow(e as u32), self.den.pow(e as u32)))
    }

    /// Substitutes `value` for variable `var`.
    pub fn substitute(&self, var: usize, value: &Scalar, symbols: &Symbols) -> Result<Scalar> {
        if !self.contains_var(var) {
            return Ok(self.clone());
        }
        let num = substitute_poly(&self.num, var, value);
        let den = substitute_poly(&self.den, var, value);
        if den.is_zero() {
            return Err(Error::Pole {
                var: symbols.name(var).to_string(),
                value: value.format(symbols),
                factor: self.den.format(symbols),
            });
        }
        num.checked_div(&den)
    }

    /// Renumbers variables: variable `i` becomes `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Scalar {
        Scalar::normalize(self.num.remap(map), self.den.remap(map))
    }

    /// Order of vanishing at `t = 0`: `self = t^v · u` with `u` regular and
    /// nonzero at `t = 0`. `None` encodes +∞ (the zero scalar).
    pub fn valuation_at_t0(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.min_exp_in(T) as i64 - self.den.min_exp_in(T) as i64)
    }

    /// Limit as `t → 0`; `None` if the scalar has a pole there.
    pub fn limit_at_t0(&self) -> Option<Scalar> {
        match self.valuation_at_t0() {
            None => Some(Scalar::zero()),
            Some(v) if v > 0 => Some(Scalar::zero()),
            Some(v) if v < 0 => None,
            Some(_) => {
                let num = self.num.eval_var(T, &Rational::zero());
                let den = self.den.eval_var(T, &Rational::zero());
                Some(Scalar::normalize(num, den))
            }
        }
    }

    /// Coefficients of the numerator as a polynomial in `t`, keyed by power.
    /// Only meaningful for the vanishing test of a residual.
    pub fn numerator_t_powers(&self) -> Vec<u32> {
        let mut powers: Vec<u32> = self.num.terms().map(|(m, _)| m.exp(T)).collect();
        powers.sort_unstable();
        powers.dedup();
        powers
    }

    /// Canonical text in the coefficient expression grammar.
    pub fn format(&self, symbols: &Symbols) -> String {
        let num = self.num.format(symbols);
        if self.den.is_one() {
            return num;
        }
        let num = if self.num.num_terms() > 1 { format!("({num})") } else { num };
        let den = self.den.format(symbols);
        let simple_den = self.den.is_monomial()
            && self.den.leading().is_some_and(|(m, _)| m.exponents().iter().filter(|&&e| e > 0).count() == 1);
        if simple_den {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }
}

fn substitute_poly(p: &Poly, var: usize, value: &Scalar) -> Scalar {
    if let Some(r) = value.as_rational() {
        return Scalar::from_poly(p.eval_var(var, &r));
    }
    let coeffs = p.to_univariate(var);
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * value) + &Scalar::from_poly(c.clone());
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let generic = Symbols {
            params: (1..=self.max_var().unwrap_or(0)).map(|i| format!("p{i}")).collect(),
        };
        f.write_str(&self.format(&generic))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return Scalar::from_poly(&self.num + &rhs.num);
            }
            return Scalar::normalize(&self.num + &rhs.num, self.den.clone());
        }
        // both operands are reduced, so only gcd(num, gcd(d1, d2)) can cancel
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return Scalar::zero();
        }
        let g2 = if g.is_constant() { g.clone() } else { gcd(&num, &g) };
        let num = num.div_exact(&g2).expect("gcd divides");
        let den = &(&d1 * &d2) * &g.div_exact(&g2).expect("gcd divides");
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel so the product is already reduced
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let lc = den.leading_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] for fallible division.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}
