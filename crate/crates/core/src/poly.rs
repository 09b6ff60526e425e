//! Integer polynomial carriers: univariate polynomials, Laurent polynomials
//! in a fixed number of variables, and Puiseux polynomials with rational
//! exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::numbers::{fmt_rational, Rational};

/// A polynomial in one variable with integer coefficients, trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly(Vec<i64>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![1])
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `(t - 1)^k`.
    pub fn t_minus_one_pow(k: usize) -> Self {
        let base = UniPoly(vec![-1, 1]);
        (0..k).fold(Self::one(), |acc, _| &acc * &base)
    }

    /// `(1 - t)^k`.
    pub fn one_minus_t_pow(k: usize) -> Self {
        let base = UniPoly(vec![1, -1]);
        (0..k).fold(Self::one(), |acc, _| &acc * &base)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `t^d p(1/t)`, or `None` if `deg p > d`.
    pub fn reverse(&self, d: usize) -> Option<Self> {
        if self.0.len() > d + 1 {
            return None;
        }
        let mut v = vec![0; d + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[d - i] = c;
        }
        Some(Self::new(v))
    }

    pub fn eval(&self, x: i64) -> i64 {
        let mut acc: i128 = 0;
        for &c in self.0.iter().rev() {
            acc = acc * x as i128 + c as i128;
        }
        i64::try_from(acc).expect("overflow evaluating polynomial")
    }

    /// `p(t^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0; (self.0.len() - 1) * k + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[i * k] = c;
        }
        Self::new(v)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    /// `t^k p(t)`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.0);
        UniPoly(v)
    }

    pub fn is_symmetric(&self, d: usize) -> bool {
        self.reverse(d).as_ref() == Some(self)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![0i64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(-1)
    }
}

impl AddAssign<&UniPoly> for UniPoly {
    fn add_assign(&mut self, o: &UniPoly) {
        *self = &*self + o;
    }
}

impl SubAssign<&UniPoly> for UniPoly {
    fn sub_assign(&mut self, o: &UniPoly) {
        *self = &*self - o;
    }
}

fn fmt_terms<I: Iterator<Item = (String, i64)>>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result {
    let mut first = true;
    for (mono, c) in terms {
        let sign = if c < 0 { "-" } else { "+" };
        if first {
            if c < 0 {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let a = c.unsigned_abs();
        match (mono.is_empty(), a) {
            (true, _) => write!(f, "{a}")?,
            (false, 1) => f.write_str(&mono)?,
            (false, _) => write!(f, "{a}*{mono}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

fn power(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(
            f,
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (power("t", i as i64), c)),
        )
    }
}

/// A Laurent polynomial in `N` variables with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent<const N: usize>(BTreeMap<[i32; N], i64>);

pub type LaurentPoly2 = Laurent<2>;
pub type LaurentPoly3 = Laurent<3>;

impl<const N: usize> Default for Laurent<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> Laurent<N> {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::monomial([0; N], 1)
    }

    pub fn monomial(e: [i32; N], c: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(e, c);
        }
        Laurent(m)
    }

    /// `p(x^e)` for a univariate `p`, where `x^e` is the monomial with
    /// exponent vector `e`.
    pub fn from_uni(p: &UniPoly, e: [i32; N]) -> Self {
        let mut out = Self::zero();
        for (i, &c) in p.coeffs().iter().enumerate() {
            let mut k = [0; N];
            for j in 0..N {
                k[j] = e[j] * i as i32;
            }
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, e: [i32; N], c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.0.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.0.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32; N], &i64)> {
        self.0.iter()
    }

    pub fn coeff(&self, e: [i32; N]) -> i64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero();
        for (e, &a) in &self.0 {
            out.add_term(*e, a * c);
        }
        out
    }

    /// Applies an arbitrary map on exponent vectors, e.g. a variable swap
    /// or inversion.
    pub fn map_exponents<F: Fn([i32; N]) -> [i32; N]>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (e, &a) in &self.0 {
            out.add_term(f(*e), a);
        }
        out
    }

    pub fn mul_monomial(&self, e: [i32; N]) -> Self {
        self.map_exponents(|k| {
            let mut r = k;
            for j in 0..N {
                r[j] += e[j];
            }
            r
        })
    }

    /// Exact division by a monomial, `None` if a negative exponent would
    /// appear.
    pub fn div_monomial(&self, e: [i32; N]) -> Option<Self> {
        let out = self.mul_monomial(e.map(|x| -x));
        out.is_polynomial().then_some(out)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Sets variable `k` to 1.
    pub fn set_one(&self, k: usize) -> Self {
        self.map_exponents(|mut e| {
            e[k] = 0;
            e
        })
    }

    /// Sum of all coefficients (every variable set to 1).
    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }
}

impl<const N: usize> Add for &Laurent<N> {
    type Output = Laurent<N>;
    fn add(self, o: &Laurent<N>) -> Laurent<N> {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl<const N: usize> Sub for &Laurent<N> {
    type Output = Laurent<N>;
    fn sub(self, o: &Laurent<N>) -> Laurent<N> {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl<const N: usize> AddAssign<&Laurent<N>> for Laurent<N> {
    fn add_assign(&mut self, o: &Laurent<N>) {
        for (e, &c) in &o.0 {
            self.add_term(*e, c);
        }
    }
}

impl<const N: usize> SubAssign<&Laurent<N>> for Laurent<N> {
    fn sub_assign(&mut self, o: &Laurent<N>) {
        for (e, &c) in &o.0 {
            self.add_term(*e, -c);
        }
    }
}

impl<const N: usize> Mul for &Laurent<N> {
    type Output = Laurent<N>;
    fn mul(self, o: &Laurent<N>) -> Laurent<N> {
        let mut out = Laurent::zero();
        for (a, &x) in &self.0 {
            for (b, &y) in &o.0 {
                let mut e = *a;
                for j in 0..N {
                    e[j] += b[j];
                }
                out.add_term(e, x * y);
            }
        }
        out
    }
}

impl<const N: usize> Neg for &Laurent<N> {
    type Output = Laurent<N>;
    fn neg(self) -> Laurent<N> {
        self.scale(-1)
    }
}

const VARS: [&str; 3] = ["u", "v", "w"];

impl<const N: usize> fmt::Display for Laurent<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // highest total degree first
        let mut terms: Vec<(&[i32; N], &i64)> = self.0.iter().collect();
        terms.sort_by_key(|(e, _)| (std::cmp::Reverse(e.iter().sum::<i32>()), std::cmp::Reverse(**e)));
        fmt_terms(
            f,
            terms.into_iter().map(|(e, &c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| power(VARS.get(j).copied().unwrap_or("x"), x as i64))
                    .collect();
                (mono.join("*"), c)
            }),
        )
    }
}

/// A finite sum of `c * t^α` with rational exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PuiseuxPoly(BTreeMap<Rational, i64>);

impl PuiseuxPoly {
    pub fn zero() -> Self {
        PuiseuxPoly(BTreeMap::new())
    }

    pub fn monomial(alpha: Rational, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(alpha, c);
        p
    }

    pub fn add_term(&mut self, alpha: Rational, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.0.entry(alpha).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.0.remove(&alpha);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &i64)> {
        self.0.iter()
    }

    pub fn coeff(&self, alpha: Rational) -> i64 {
        self.0.get(&alpha).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero();
        for (&a, &x) in &self.0 {
            out.add_term(a, x * c);
        }
        out
    }

    /// Product with an ordinary polynomial in `t`.
    pub fn mul_uni(&self, p: &UniPoly) -> Self {
        let mut out = Self::zero();
        for (&a, &x) in &self.0 {
            for (i, &c) in p.coeffs().iter().enumerate() {
                out.add_term(a + Rational::from(i as i64), x * c);
            }
        }
        out
    }

    /// `t^s p(t)` for a univariate polynomial `p`.
    pub fn from_uni_shifted(p: &UniPoly, s: Rational) -> Self {
        let mut out = Self::zero();
        for (i, &c) in p.coeffs().iter().enumerate() {
            out.add_term(s + Rational::from(i as i64), c);
        }
        out
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter<F: Fn(&Rational) -> bool>(&self, keep: F) -> Self {
        PuiseuxPoly(self.0.iter().filter(|(a, _)| keep(a)).map(|(a, c)| (*a, *c)).collect())
    }
}

impl AddAssign<&PuiseuxPoly> for PuiseuxPoly {
    fn add_assign(&mut self, o: &PuiseuxPoly) {
        for (&a, &c) in &o.0 {
            self.add_term(a, c);
        }
    }
}

impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(
            f,
            self.0.iter().map(|(a, &c)| {
                let mono = if *a.denom() == 1 {
                    power("t", *a.numer())
                } else {
                    format!("t^({})", fmt_rational(a))
                };
                (mono, c)
            }),
        )
    }
}
