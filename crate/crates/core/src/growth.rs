//! Growth of Betti sequences: rational generating functions found by
//! Berlekamp–Massey over `Q`, pole orders at `t = 1`, and complexity.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::BettiTable;
use crate::field::Field;

/// Dense univariate polynomial, coefficients lowest degree first, no
/// trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = F::one();
        Poly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Truncation to degrees `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).cloned().collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].inverse().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * lead.clone();
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        match a.degree() {
            None => a,
            Some(d) => {
                let inv = a.coeffs[d].inverse().expect("nonzero");
                a.scale(&inv)
            }
        }
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

/// Shortest linear recurrence `Σ_{i=0}^{L} c_i s_{n-i} = 0` (`n >= L`,
/// `c_0 = 1`) generating `s`; returns `(c, L)` with `c` of length `L + 1`.
pub fn berlekamp_massey<F: Field>(s: &[F]) -> (Vec<F>, usize) {
    let mut c = vec![F::one()];
    let mut b = vec![F::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = F::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d = d + c[i].clone() * s[n - i].clone();
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = d.clone() / bd.clone();
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, F::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = c[i + m].clone() - coef.clone() * bi.clone();
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, F::zero());
    (c, l)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn to_rational(p: &[BigInt]) -> Poly<BigRational> {
    Poly::new(p.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// `num / den` with integer coefficients, lowest degree first,
/// `gcd(num, den) = 1` and `den(0) = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalSeries {
    pub num: Vec<BigInt>,
    pub den: Vec<BigInt>,
}

impl RationalSeries {
    /// Reduces `num / den` over `Q`; `None` if the result does not have
    /// integer coefficients with `den(0) = 1`, or `den(0) = 0`.
    pub fn from_rational(num: &Poly<BigRational>, den: &Poly<BigRational>) -> Option<Self> {
        if den.coeff(0).is_zero() {
            return None;
        }
        let g = num.gcd(den);
        let (mut n, mut d) = if g.is_zero() {
            (num.clone(), den.clone())
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let c0 = d.coeff(0).inverse()?;
        n = n.scale(&c0);
        d = d.scale(&c0);
        let ints = |p: &Poly<BigRational>| -> Option<Vec<BigInt>> {
            p.coeffs().iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
        };
        Some(RationalSeries {
            num: ints(&n)?,
            den: ints(&d)?,
        })
    }

    pub fn polynomial(coeffs: &[BigInt]) -> Self {
        let p = to_rational(coeffs);
        RationalSeries {
            num: p.coeffs().iter().map(|c| c.to_integer()).collect(),
            den: vec![BigInt::one()],
        }
    }

    pub fn numerator(&self) -> Poly<BigRational> {
        to_rational(&self.num)
    }

    pub fn denominator(&self) -> Poly<BigRational> {
        to_rational(&self.den)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1
    }

    /// First `n` coefficients of the power series.
    pub fn expand(&self, n: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = self.num.get(k).cloned().unwrap_or_default();
            for i in 1..self.den.len().min(k + 1) {
                v -= &self.den[i] * &out[k - i];
            }
            out.push(v);
        }
        out
    }

    /// Expansion agrees with `seq` term by term.
    pub fn reproduces(&self, seq: &[usize]) -> bool {
        self.expand(seq.len()).iter().zip(seq).all(|(a, &b)| *a == BigInt::from(b))
    }

    /// `p * self + q * other` for polynomial multipliers.
    pub fn combine(&self, p: &Poly<BigRational>, other: &RationalSeries, q: &Poly<BigRational>) -> RationalSeries {
        let (a, b) = (self.numerator(), self.denominator());
        let (c, d) = (other.numerator(), other.denominator());
        let num = p.mul(&a).mul(&d).add(&q.mul(&c).mul(&b));
        let den = b.mul(&d);
        Self::from_rational(&num, &den).expect("denominators with unit constant term stay integral")
    }

    /// Multiplicity of `t = 1` as a pole.
    pub fn pole_order_at_one(&self) -> usize {
        let one = BigRational::one();
        let root = Poly::new(vec![-one.clone(), one]);
        let mult = |mut p: Poly<BigRational>| {
            let mut k = 0usize;
            while !p.is_zero() {
                let (q, r) = p.div_rem(&root);
                if !r.is_zero() {
                    break;
                }
                p = q;
                k += 1;
            }
            k
        };
        mult(self.denominator()).saturating_sub(mult(self.numerator()))
    }

    /// Denominator with every cyclotomic factor removed.
    pub fn non_cyclotomic_denominator(&self) -> Poly<BigRational> {
        strip_cyclotomic(self.denominator())
    }

    pub fn num_i64(&self) -> Vec<i64> {
        self.num.iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect()
    }

    pub fn den_i64(&self) -> Vec<i64> {
        self.den.iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect()
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn show(p: &[BigInt]) -> String {
            let mut s = String::new();
            for (i, c) in p.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                if s.is_empty() {
                    if c.is_negative() {
                        s.push('-');
                    }
                } else {
                    s.push_str(&format!(" {sign} "));
                }
                let a = c.abs();
                match (i, a.is_one()) {
                    (0, _) => s.push_str(&a.to_string()),
                    (1, true) => s.push('t'),
                    (1, false) => s.push_str(&format!("{a}t")),
                    (_, true) => s.push_str(&format!("t^{i}")),
                    (_, false) => s.push_str(&format!("{a}t^{i}")),
                }
            }
            if s.is_empty() {
                s.push('0');
            }
            s
        }
        if self.is_polynomial() {
            write!(f, "{}", show(&self.num))
        } else {
            write!(f, "({}) / ({})", show(&self.num), show(&self.den))
        }
    }
}

/// `Φ_n` over `Q`.
fn cyclotomic(n: usize) -> Poly<BigRational> {
    let mut p = Poly::monomial(n).sub(&Poly::one());
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.div_rem(&cyclotomic(d)).0;
        }
    }
    p
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count()
}

fn strip_cyclotomic(mut p: Poly<BigRational>) -> Poly<BigRational> {
    let deg = p.degree().unwrap_or(0);
    // φ(n) >= sqrt(n / 2), so n <= 2 deg^2 covers every factor
    for n in 1..=(2 * deg * deg).max(2) {
        if euler_phi(n) > p.degree().unwrap_or(0) {
            continue;
        }
        let phi = cyclotomic(n);
        loop {
            let (q, r) = p.div_rem(&phi);
            if !r.is_zero() {
                break;
            }
            p = q;
        }
    }
    p
}

/// Largest prefix offset tried before fitting a recurrence; the first
/// terms of a spliced complex need not follow the tail.
pub const MAX_SKIP: usize = 2;

pub const DEFAULT_GUARD: usize = 3;

/// Rational generating function of `betti`, found from a recurrence of
/// order at most `len / 2 - guard` that also holds on `guard` terms not used
/// to find it. Up to `MAX_SKIP` leading terms may be left out of the
/// recurrence.
pub fn fit_rational(betti: &[usize], guard: usize) -> Option<RationalSeries> {
    if betti.len() < 2 * guard + 4 {
        return None;
    }
    let seq: Vec<BigRational> = betti.iter().map(|&b| rat(b as i64)).collect();
    for skip in 0..=MAX_SKIP {
        let s = &seq[skip..];
        // the whole window bounds the order; the fitted part must still
        // determine the recurrence
        let Some(bound) = (seq.len() / 2).checked_sub(guard) else {
            continue;
        };
        let bound = bound.min((s.len() - guard) / 2);
        let (c, l) = berlekamp_massey(&s[..s.len() - guard]);
        if l > bound {
            continue;
        }
        let holds = (l..s.len()).all(|n| (0..=l).fold(BigRational::zero(), |acc, i| acc + &c[i] * &s[n - i]).is_zero());
        if !holds {
            continue;
        }
        let den = Poly::new(c);
        let tail = Poly::new(s.to_vec()).mul(&den).truncate(l);
        let prefix = Poly::new(seq[..skip].to_vec());
        let num = prefix.mul(&den).add(&Poly::monomial(skip).mul(&tail));
        if let Some(series) = RationalSeries::from_rational(&num, &den) {
            debug_assert!(series.reproduces(betti));
            return Some(series);
        }
    }
    None
}

/// Complexity value; exponential means faster than any polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cx {
    Finite(usize),
    Exponential,
    Inconclusive,
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cx::Finite(c) => write!(f, "{c}"),
            Cx::Exponential => write!(f, "exponential"),
            Cx::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complexity {
    pub value: Cx,
    /// Not backed by a validated rational fit.
    pub heuristic: bool,
    pub series: Option<RationalSeries>,
}

impl Complexity {
    /// Determined by a validated fit.
    pub fn is_exact(&self) -> bool {
        !self.heuristic && self.value != Cx::Inconclusive
    }
}

/// Minimum tail length for [`complexity`].
pub const MIN_TAIL: usize = 6;

/// Ratio threshold `1 + ε` and number of consecutive ratios for the
/// exponential fallback.
const RATIO_EPS: (i64, i64) = (1, 10);
const RATIO_RUN: usize = 5;

pub fn complexity(betti: &[usize], guard: usize) -> Complexity {
    if betti.len() < MIN_TAIL {
        return Complexity {
            value: Cx::Inconclusive,
            heuristic: false,
            series: None,
        };
    }
    if let Some(series) = fit_rational(betti, guard) {
        let rest = series.non_cyclotomic_denominator();
        let value = if rest.degree().unwrap_or(0) > 0 {
            // an integer factor with unit constant term and a root off the
            // unit circle has a root inside it
            Cx::Exponential
        } else {
            Cx::Finite(series.pole_order_at_one())
        };
        return Complexity {
            value,
            heuristic: false,
            series: Some(series),
        };
    }
    let value = heuristic_complexity(betti);
    Complexity {
        value,
        heuristic: value != Cx::Inconclusive,
        series: None,
    }
}

fn heuristic_complexity(betti: &[usize]) -> Cx {
    // finite differences first: a short polynomial tail also has ratios
    // above 1 + ε
    let mut diff: Vec<i128> = betti.iter().map(|&x| x as i128).collect();
    let mut t = 0;
    while diff.len() >= 4 {
        if diff[diff.len() / 2..].iter().all(|&x| x <= 0) {
            return Cx::Finite(t);
        }
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        t += 1;
    }
    let tail = &betti[betti.len().saturating_sub(RATIO_RUN + 1)..];
    let (a, b) = RATIO_EPS;
    // β_{n+1} / β_n > 1 + a/b  <=>  b β_{n+1} > (a + b) β_n
    if tail.len() == RATIO_RUN + 1
        && tail.windows(2).all(|w| w[0] > 0 && (b as u128) * (w[1] as u128) > ((a + b) as u128) * (w[0] as u128))
    {
        return Cx::Exponential;
    }
    Cx::Inconclusive
}

/// Three-valued verdict used for symmetry.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

/// `cx⁺ = cx⁻`, decided only from validated fits.
pub fn same_growth(a: &Complexity, b: &Complexity) -> Verdict {
    if !a.is_exact() || !b.is_exact() {
        return Verdict::Inconclusive;
    }
    match (a.value, b.value) {
        (Cx::Finite(x), Cx::Finite(y)) => Verdict::from_bool(x == y),
        (Cx::Exponential, Cx::Finite(_)) | (Cx::Finite(_), Cx::Exponential) => Verdict::No,
        _ => Verdict::Inconclusive,
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrowthReport {
    pub cx_plus: Complexity,
    pub cx_minus: Complexity,
    pub pole_order_plus: Option<usize>,
    pub pole_order_minus: Option<usize>,
    pub symmetric: Verdict,
    /// Number of Betti values used on each side.
    pub window: (usize, usize),
}

impl GrowthReport {
    pub fn poincare_plus(&self) -> Option<&RationalSeries> {
        self.cx_plus.series.as_ref()
    }

    pub fn poincare_minus(&self) -> Option<&RationalSeries> {
        self.cx_minus.series.as_ref()
    }
}

/// `β_0, β_{-1}, β_{-2}, ...`: the coefficients of `P⁻`.
pub fn minus_sequence(table: &BettiTable) -> Vec<usize> {
    let mut v = Vec::new();
    if let Some(b0) = table.get(0) {
        v.push(b0);
        v.extend(table.minus());
    }
    v
}

/// Complexities and Poincaré series of both sides of a Betti table.
pub fn growth_report(table: &BettiTable, guard: usize) -> GrowthReport {
    let plus = table.plus();
    let minus = minus_sequence(table);
    let cx_plus = complexity(&plus, guard);
    let cx_minus = complexity(&minus, guard);
    let pole = |c: &Complexity| c.series.as_ref().map(RationalSeries::pole_order_at_one);
    GrowthReport {
        pole_order_plus: pole(&cx_plus),
        pole_order_minus: pole(&cx_minus),
        symmetric: same_growth(&cx_plus, &cx_minus),
        window: (plus.len(), minus.len()),
        cx_plus,
        cx_minus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fits() {
        let s = fit_rational(&[1; 12], 3).unwrap();
        assert_eq!((s.num.clone(), s.den.clone()), (ints(&[1]), ints(&[1, -1])));
        let lin: Vec<usize> = (1..=12).collect();
        let s = fit_rational(&lin, 3).unwrap();
        assert_eq!((s.num.clone(), s.den.clone()), (ints(&[1]), ints(&[1, -2, 1])));
        let pow: Vec<usize> = (0..12).map(|n| 1 << n).collect();
        let s = fit_rational(&pow, 3).unwrap();
        assert_eq!(s.den, ints(&[1, -2]));
        assert_eq!(s.pole_order_at_one(), 0);
    }

    #[test]
    fn fit_needs_enough_terms() {
        assert!(fit_rational(&[1; 9], 3).is_none());
        assert!(fit_rational(&[1; 10], 3).is_some());
    }

    #[test]
    fn irregular_prefix_is_skipped() {
        // 1, 1, 2, 3, 4, ...
        let mut v = vec![1];
        v.extend(1..=10);
        let s = fit_rational(&v, 3).unwrap();
        assert!(s.reproduces(&v));
        assert_eq!(s.pole_order_at_one(), 2);
    }

    #[test]
    fn pole_orders() {
        let s = |n: &[i64], d: &[i64]| RationalSeries::from_rational(&Poly::from_i64(n), &Poly::from_i64(d)).unwrap();
        assert_eq!(s(&[1], &[1, -1]).pole_order_at_one(), 1);
        assert_eq!(s(&[1], &[1, -2, 1]).pole_order_at_one(), 2);
        let c = s(&[1, -1], &[1, 0, -1]);
        assert_eq!(c.den, ints(&[1, 1]));
        assert_eq!(c.pole_order_at_one(), 0);
    }

    #[test]
    fn complexities() {
        assert_eq!(complexity(&[1; 10], 3).value, Cx::Finite(1));
        let lin: Vec<usize> = (1..=10).collect();
        assert_eq!(complexity(&lin, 3).value, Cx::Finite(2));
        let pow: Vec<usize> = (0..10).map(|n| 1 << n).collect();
        let c = complexity(&pow, 3);
        assert_eq!(c.value, Cx::Exponential);
        assert!(!c.heuristic);
        let z = complexity(&[3, 1, 0, 0, 0, 0, 0, 0, 0, 0], 3);
        assert_eq!(z.value, Cx::Finite(0));
        // periodic with period 2 still has linear complexity
        let p: Vec<usize> = (0..10).map(|n| 1 + n % 2).collect();
        assert_eq!(complexity(&p, 3).value, Cx::Finite(1));
    }

    #[test]
    fn heuristic_fallbacks() {
        // too short to fit, long enough for the ratio test
        let pow: Vec<usize> = (0..8).map(|n| 1 << n).collect();
        let c = complexity(&pow, 3);
        assert_eq!(c.value, Cx::Exponential);
        assert!(c.heuristic);
        let c = complexity(&[1, 2, 3, 4, 5, 6, 7], 3);
        assert_eq!(c.value, Cx::Finite(2));
        assert!(c.heuristic);
        assert_eq!(complexity(&[1, 2, 3], 3).value, Cx::Inconclusive);
    }

    #[test]
    fn combine_cancels_poles() {
        let m = fit_rational(&(1..=12).collect::<Vec<_>>(), 3).unwrap();
        let k = fit_rational(&[1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2], 3).unwrap();
        // (1 - t^2) P(M) - t P(K) is a polynomial
        let r = m.combine(&Poly::from_i64(&[1, 0, -1]), &k, &Poly::from_i64(&[0, -1]));
        assert!(r.is_polynomial());
    }

    #[test]
    fn berlekamp_massey_over_a_prime_field() {
        type F = Fp<101>;
        let fib: Vec<F> = [1, 1, 2, 3, 5, 8, 13, 21].iter().map(|&x| F::new(x)).collect();
        let (c, l) = berlekamp_massey(&fib);
        assert_eq!(l, 2);
        assert_eq!(c, vec![F::new(1), F::new(-1), F::new(-1)]);
    }

    #[test]
    fn cyclotomic_stripping() {
        let p: Poly<BigRational> = Poly::from_i64(&[1, 0, 0, -1]); // 1 - t^3
        assert_eq!(strip_cyclotomic(p).degree(), Some(0));
        let q: Poly<BigRational> = Poly::from_i64(&[1, -3, 1]);
        assert_eq!(strip_cyclotomic(q).degree(), Some(2));
    }

    proptest! {
        #[test]
        fn fitted_series_reproduce_their_input(a in 0usize..5, b in 0usize..5, c in 0usize..4, len in 12usize..18) {
            let seq: Vec<usize> = (0..len).map(|n| a + b * n + c * n * n).collect();
            let s = fit_rational(&seq, 3).unwrap();
            prop_assert!(s.reproduces(&seq));
            let expect = if c > 0 { 3 } else if b > 0 { 2 } else if a > 0 { 1 } else { 0 };
            prop_assert_eq!(s.pole_order_at_one(), expect);
        }

        #[test]
        fn fit_reproduces_whenever_present(seq in proptest::collection::vec(0usize..20, 10..16)) {
            if let Some(s) = fit_rational(&seq, 3) {
                prop_assert!(s.reproduces(&seq));
            }
        }
    }
}
