//! Exact arithmetic for roots of unity: dense integer polynomials in
//! `Z[x]/(x^m − 1)` where `x` stands for a primitive m-th root of unity ζ.
//!
//! Products only ever wrap exponents mod `m`, so multiplication is cheap; the
//! single place a real identity of roots of unity is needed is the zero test,
//! which reduces a representative modulo the cyclotomic polynomial `Φ_m`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An element of `Z[x]/(x^m − 1)`: exactly `m` integer coefficients,
/// ascending by exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElem {
    coeffs: Vec<BigInt>,
}

impl CycloElem {
    pub fn zero(m: u32) -> CycloElem {
        CycloElem {
            coeffs: vec![BigInt::zero(); m as usize],
        }
    }

    pub fn one(m: u32) -> CycloElem {
        Self::zeta_pow(m, 0)
    }

    /// `ζ^e`, with `e` reduced mod `m` (negative exponents allowed).
    pub fn zeta_pow(m: u32, e: i64) -> CycloElem {
        let mut coeffs = vec![BigInt::zero(); m as usize];
        coeffs[e.rem_euclid(m as i64) as usize] = BigInt::one();
        CycloElem { coeffs }
    }

    pub fn from_int(m: u32, n: i64) -> CycloElem {
        let mut coeffs = vec![BigInt::zero(); m as usize];
        coeffs[0] = BigInt::from(n);
        CycloElem { coeffs }
    }

    pub fn from_coeffs(m: u32, coeffs: &[BigInt]) -> CycloElem {
        let mut out = Self::zero(m);
        for (e, c) in coeffs.iter().enumerate() {
            out.coeffs[e % m as usize] += c;
        }
        out
    }

    pub fn modulus(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        CycloElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        CycloElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, rhs: &CycloElem) -> CycloElem {
        let m = self.coeffs.len();
        assert_eq!(m, rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); m];
        for (e1, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (e2, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[(e1 + e2) % m] += a * b;
            }
        }
        CycloElem { coeffs: out }
    }

    pub fn scale(&self, factor: &BigInt) -> CycloElem {
        CycloElem {
            coeffs: self.coeffs.iter().map(|a| a * factor).collect(),
        }
    }

    /// Whether the element is zero as a representative (every coefficient 0),
    /// before any cyclotomic identification.
    pub fn is_zero_repr(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Whether the element vanishes at ζ, i.e. the representative is
    /// divisible by the (monic) cyclotomic polynomial `phi = Φ_m`.
    pub fn is_zero_mod(&self, phi: &[BigInt]) -> bool {
        poly_rem(&self.coeffs, phi).iter().all(|c| c.is_zero())
    }
}

/// Remainder of `a` under division by the monic polynomial `den`.
fn poly_rem(a: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let deg = den.len() - 1;
    assert!(den[deg].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = a.to_vec();
    for top in (deg..rem.len()).rev() {
        if rem[top].is_zero() {
            continue;
        }
        let q = std::mem::replace(&mut rem[top], BigInt::zero());
        for (offset, dcoef) in den[..deg].iter().enumerate() {
            let idx = top - deg + offset;
            let delta = &q * dcoef;
            rem[idx] -= delta;
        }
    }
    rem.truncate(deg.min(rem.len()));
    rem
}

/// Exact quotient `num / den` for monic `den` dividing `num`.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let deg = den.len() - 1;
    assert!(den[deg].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); rem.len() - deg];
    for top in (deg..rem.len()).rev() {
        let q = std::mem::replace(&mut rem[top], BigInt::zero());
        for (offset, dcoef) in den[..deg].iter().enumerate() {
            let delta = &q * dcoef;
            rem[top - deg + offset] -= delta;
        }
        quot[top - deg] = q;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// The n-th cyclotomic polynomial `Φ_n(x)` with exact integer coefficients
/// (ascending), via the recursion `x^n − 1 = ∏_{m|n} Φ_m(x)`.
pub fn cyclotomic_polynomial(n: u32) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let mut memo: std::collections::BTreeMap<u32, Vec<BigInt>> = Default::default();
    memo.insert(1, vec![BigInt::from(-1), BigInt::one()]);
    for k in divisors(n) {
        if memo.contains_key(&k) {
            continue;
        }
        let mut num = vec![BigInt::zero(); k as usize + 1];
        num[0] = BigInt::from(-1);
        num[k as usize] = BigInt::one();
        let mut quot = num;
        for m in divisors(k) {
            if m < k {
                quot = poly_div_exact(&quot, &memo[&m]);
            }
        }
        memo.insert(k, quot);
    }
    Ok(memo.remove(&n).unwrap())
}
