//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Root location is certified exactly: the Taylor coefficients at the upper
//! end of a bracket (the derivative sign chain) rule out larger roots, with a
//! Sturm count up to the Cauchy bound as fallback, and bisection is driven by
//! Sturm counts so the bracket always holds the largest root.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficients in ascending degree order; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Converts rational coefficients, returning `None` unless all are integers.
    pub fn from_rationals(coeffs: &[BigRational]) -> Option<Self> {
        coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Polynomial::new)
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Polynomial {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// `[p(x), p'(x), p''(x), ...]` up to the constant derivative.
    pub fn derivative_chain(&self, x: &BigRational) -> Vec<BigRational> {
        let mut out = Vec::new();
        let mut p = self.clone();
        while !p.is_zero() {
            out.push(p.eval_rational(x));
            p = p.derivative();
        }
        out
    }

    fn to_rational(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }
}

/// Exact value of `p(x)`.
pub fn poly_eval_int(p: &Polynomial, x: i64) -> BigInt {
    p.eval(&BigInt::from(x))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `x^3 - (n-3)x^2 - (n+t-3)x - t^2 + (n+4)t - n - 7`; its largest root is
/// the index of the one-negative-edge attachment graph on `n` vertices with
/// `t - 1` attachment edges.
pub fn g_poly(n: i64, t: i64) -> Polynomial {
    Polynomial::from_i64(&[-t * t + (n + 4) * t - n - 7, -(n + t - 3), -(n - 3), 1])
}

/// Rational polynomial used internally for Sturm sequences.
#[derive(Clone, Debug, PartialEq)]
struct RatPoly(Vec<BigRational>);

impl RatPoly {
    fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Quotient and remainder of `self / d`.
    fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lead = d.0.last().unwrap().clone();
        if rem.len() < d.0.len() {
            return (RatPoly(Vec::new()), RatPoly::new(rem));
        }
        let mut quo = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quo), RatPoly::new(rem))
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

struct Sturm {
    seq: Vec<RatPoly>,
}

impl Sturm {
    /// Sturm sequence of the square-free part of `p`.
    fn new(p: &Polynomial) -> Self {
        let rp = p.to_rational();
        let g = rp.gcd(&rp.derivative());
        let sf = if g.degree() == 0 { rp } else { rp.div_rem(&g).0 };
        let mut seq = vec![sf.clone(), sf.derivative()];
        loop {
            let k = seq.len();
            if seq[k - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[k - 2].div_rem(&seq[k - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(RatPoly::new(r.0.into_iter().map(|c| -c).collect()));
        }
        Sturm { seq }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct real roots in `(a, b]`.
    fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::PreconditionViolated(format!("non-finite bound {x}")))
}

/// `1 + max |a_i / a_n|`: every root has modulus below this.
fn cauchy_bound(p: &Polynomial) -> BigRational {
    let lead = BigRational::from_integer(p.leading().unwrap().abs());
    let m = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| BigRational::from_integer(c.abs()) / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// True when all Taylor coefficients of `p` at `x` share the sign of the
/// leading coefficient, which rules out roots in `[x, ∞)`.
pub fn chain_excludes_roots_from(p: &Polynomial, x: &BigRational) -> bool {
    let Some(lead) = p.leading() else { return false };
    let positive = lead.is_positive();
    p.derivative_chain(x)
        .iter()
        .all(|v| if positive { v.is_positive() } else { v.is_negative() })
}

/// Largest real root of `p`, certified to lie in `[lo, hi]`, to within `tol`.
pub fn largest_real_root(p: &Polynomial, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let bracket_err = |reason: &str| Error::BracketError {
        lo,
        hi,
        reason: reason.to_string(),
    };
    if p.degree().unwrap_or(0) == 0 {
        return Err(bracket_err("constant polynomial has no isolated roots"));
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi || tol.is_nan() || tol <= 0.0 {
        return Err(bracket_err("need lo < hi and tol > 0"));
    }
    let mut a = exact(lo)?;
    let mut b = exact(hi)?;
    let sturm = Sturm::new(p);

    if !chain_excludes_roots_from(p, &b) {
        // p(hi) = 0 is allowed; anything strictly above is not.
        let cb = cauchy_bound(p);
        if cb > b && sturm.count(&b, &cb) > 0 {
            return Err(bracket_err("a root lies above the bracket"));
        }
    }
    let total = sturm.count(&a, &b) + usize::from(p.eval_rational(&a).is_zero());
    if total == 0 {
        return Err(bracket_err("no root in bracket"));
    }
    if sturm.count(&a, &b) == 0 {
        // Only root is the left endpoint itself.
        return Ok(lo);
    }

    let tol_q = exact(tol)?;
    let two = BigRational::from_integer(BigInt::from(2));
    while &b - &a > tol_q {
        let mid = (&a + &b) / &two;
        if sturm.count(&mid, &b) > 0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let mid = (&a + &b) / two;
    // Report integer roots exactly.
    let r = mid.round();
    if r > a && r <= b && p.eval_rational(&r).is_zero() {
        return Ok(r.to_f64().unwrap_or(f64::NAN));
    }
    Ok(mid.to_f64().unwrap_or(f64::NAN))
}

/// Characteristic polynomial `det(λI - A)` by Leverrier–Faddeev, ascending
/// coefficients, exact over the rationals.
pub fn char_poly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let k = a.len();
    let mut coeffs = vec![BigRational::zero(); k + 1];
    coeffs[k] = BigRational::one();
    let identity = |c: &BigRational| -> Vec<Vec<BigRational>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { c.clone() } else { BigRational::zero() })
                    .collect()
            })
            .collect()
    };
    let matmul = |x: &[Vec<BigRational>], y: &[Vec<BigRational>]| -> Vec<Vec<BigRational>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).fold(BigRational::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                    .collect()
            })
            .collect()
    };
    // M_1 = I, c_{k-1} = -tr(A)
    let mut m = identity(&BigRational::one());
    for step in 1..=k {
        let am = matmul(a, &m);
        let trace = (0..k).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
        let c = -trace / BigRational::from_integer(BigInt::from(step));
        coeffs[k - step] = c.clone();
        if step < k {
            m = am;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] += &c;
            }
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn g_poly_at_seven_three() {
        let g = g_poly(7, 3);
        assert_eq!(g, Polynomial::from_i64(&[10, -7, -4, 1]));
        assert_eq!(g.to_string(), "x^3 - 4x^2 - 7x + 10");
        assert_eq!(poly_eval_int(&g, 5), BigInt::zero());
    }

    #[test]
    fn zero_polynomial() {
        let z = Polynomial::from_i64(&[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(poly_eval_int(&z, 17), BigInt::zero());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn derivative_and_arithmetic() {
        let p = Polynomial::from_i64(&[1, 2, 3]);
        assert_eq!(p.derivative(), Polynomial::from_i64(&[2, 6]));
        assert_eq!(p.nth_derivative(3), Polynomial::zero());
        let lin = Polynomial::from_i64(&[-1, 1]);
        assert_eq!(&p * &lin, Polynomial::from_i64(&[-1, -1, -1, 3]));
        assert_eq!(&(&p + &lin) - &lin, p);
        assert_eq!(&p + &(-&p), Polynomial::zero());
    }

    #[test]
    fn sqrt_two() {
        let p = Polynomial::from_i64(&[-2, 0, 1]);
        let r = largest_real_root(&p, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn largest_of_several_roots_in_bracket() {
        // (x-1)(x-2)(x-3): bracket holds all three roots.
        let p = Polynomial::from_i64(&[-6, 11, -6, 1]);
        let r = largest_real_root(&p, 0.5, 3.5, 1e-12).unwrap();
        assert!((r - 3.0).abs() < 1e-12);
    }

    #[test]
    fn root_above_bracket_is_rejected() {
        let p = Polynomial::from_i64(&[-6, 11, -6, 1]);
        assert!(matches!(
            largest_real_root(&p, 0.5, 2.5, 1e-10),
            Err(Error::BracketError { .. })
        ));
        let none = Polynomial::from_i64(&[1, 0, 1]);
        assert!(largest_real_root(&none, -3.0, 3.0, 1e-10).is_err());
    }

    #[test]
    fn double_root() {
        // (x-2)^2 (x+1): no sign change at 2 but Sturm still isolates it.
        let p = &Polynomial::from_i64(&[4, -4, 1]) * &Polynomial::from_i64(&[1, 1]);
        let r = largest_real_root(&p, 1.0, 3.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn leverrier_faddeev_small() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(2)]];
        assert_eq!(char_poly(&a), vec![q(3), q(-4), q(1)]);
        let b = vec![
            vec![q(0), q(-1), q(3), q(0)],
            vec![q(-1), q(0), q(3), q(0)],
            vec![q(1), q(1), q(2), q(2)],
            vec![q(0), q(0), q(3), q(1)],
        ];
        // Q1 at n = 7: (λ-1)(λ^3 - 2λ^2 - 13λ + 2)
        let expect = &Polynomial::from_i64(&[-1, 1]) * &Polynomial::from_i64(&[2, -13, -2, 1]);
        assert_eq!(Polynomial::from_rationals(&char_poly(&b)).unwrap(), expect);
    }

    #[test]
    fn chain_certificate() {
        let g = g_poly(10, 3);
        assert!(chain_excludes_roots_from(&g, &q(9)));
        assert!(!chain_excludes_roots_from(&g, &q(7)));
    }
}
