//! Independent exact verification of the residue intersection rules.
//!
//! Each line is realized as a pair of projective planes with coefficients in
//! the 2d-th cyclotomic field (η = ζ², v = ζ^{c'} with odd c'). Surface
//! membership is decided by substituting a parametrization into
//! `x^d − y^d − z^d + w^d`, and pairwise intersection by the vanishing of the
//! 4×4 determinant of the stacked plane coefficients. No floating point
//! anywhere; zero tests reduce modulo `Φ_{2d}`.
//!
//! The index order for ℒ⁰ follows the intersection rules and the worked
//! tables: `L⁰_{k,i}` is the line `y = η^k x, w = η^i z`. (The display that
//! introduces the lines swaps the two exponents for ℒ⁰, which contradicts its
//! own incidence relations; every downstream statement uses this order.)

use num_bigint::BigInt;
use num_traits::One;

use crate::cyclo::{cyclotomic_polynomial, CycloElem};
use crate::error::{Error, Result};
use crate::line::{LineId, Stratum};
use crate::residue::SurfaceParams;

/// Two independent projective planes cutting out a line in P³; coefficients
/// are in the order (x, y, z, w).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanePair {
    rows: [[CycloElem; 4]; 2],
}

impl PlanePair {
    pub fn from_rows(rows: [[CycloElem; 4]; 2]) -> PlanePair {
        PlanePair { rows }
    }

    pub fn rows(&self) -> &[[CycloElem; 4]; 2] {
        &self.rows
    }
}

/// The defining plane pair of a line:
/// `L⁰_{k,i} → (y − ζ^{2k}x, w − ζ^{2i}z)`,
/// `L¹_{k,i} → (x − ζ^{2(k+i)}z, y − ζ^{2i}w)`,
/// `L²_{k,i} → (x − ζ^{c'+2i}w, y − ζ^{c'+2(k+i)}z)`.
pub fn planes_of(params: &SurfaceParams, l: LineId) -> PlanePair {
    let m = 2 * params.d();
    let cp = params.v_zeta_exponent() as i64;
    let (k, i) = (l.k() as i64, l.i() as i64);
    let zeta = |e: i64| CycloElem::zeta_pow(m, e).neg();
    let one = || CycloElem::one(m);
    let zero = || CycloElem::zero(m);
    let rows = match l.s() {
        Stratum::L0 => [
            [zeta(2 * k), one(), zero(), zero()],
            [zero(), zero(), zeta(2 * i), one()],
        ],
        Stratum::L1 => [
            [one(), zero(), zeta(2 * (k + i)), zero()],
            [zero(), one(), zero(), zeta(2 * i)],
        ],
        Stratum::L2 => [
            [one(), zero(), zero(), zeta(cp + 2 * i)],
            [zero(), one(), zeta(cp + 2 * (k + i)), zero()],
        ],
    };
    PlanePair::from_rows(rows)
}

/// Whether the line cut out by the plane pair lies on `x^d − y^d − z^d + w^d`.
///
/// The line is parametrized exactly: pick two coordinates whose 2×2 minor is
/// invertible in the field, scale by its determinant to stay in the ring, and
/// expand the degree-d binomials; the line is on the surface iff every
/// coefficient of the resulting binary form vanishes.
pub fn plane_pair_on_surface(params: &SurfaceParams, planes: &PlanePair) -> Result<bool> {
    let d = params.d();
    let m = 2 * d;
    let phi = cyclotomic_polynomial(m)?;
    let rows = planes.rows();

    // First coordinate pair with a nonsingular 2x2 minor; none means rank < 2.
    let mut solved = None;
    'outer: for r in 0..4 {
        for s in (r + 1)..4 {
            let det = rows[0][r]
                .mul(&rows[1][s])
                .sub(&rows[0][s].mul(&rows[1][r]));
            if !det.is_zero_mod(&phi) {
                solved = Some((r, s, det));
                break 'outer;
            }
        }
    }
    let (r, s, det) = solved.ok_or(Error::DegeneratePlanes)?;
    let free: Vec<usize> = (0..4).filter(|&c| c != r && c != s).collect();
    let (p, q) = (free[0], free[1]);

    // Points of the line, scaled by det: X_p = det·u, X_q = det·v, and
    // [X_r, X_s] = −adj(M)·(col_p·u + col_q·v). Each coordinate is a linear
    // form A·u + B·v.
    let adj = [
        [rows[1][s].clone(), rows[0][s].neg()],
        [rows[1][r].neg(), rows[0][r].clone()],
    ];
    let mut coord_u = [
        CycloElem::zero(m),
        CycloElem::zero(m),
        CycloElem::zero(m),
        CycloElem::zero(m),
    ];
    let mut coord_v = coord_u.clone();
    coord_u[p] = det.clone();
    coord_v[q] = det;
    for (t, &pos) in [r, s].iter().enumerate() {
        coord_u[pos] = adj[t][0]
            .mul(&rows[0][p])
            .add(&adj[t][1].mul(&rows[1][p]))
            .neg();
        coord_v[pos] = adj[t][0]
            .mul(&rows[0][q])
            .add(&adj[t][1].mul(&rows[1][q]))
            .neg();
    }

    // Substitute into x^d − y^d − z^d + w^d and test each coefficient of
    // u^e v^{d−e}.
    let sign = [1i64, -1, -1, 1];
    let mut pow_u: Vec<Vec<CycloElem>> = Vec::with_capacity(4);
    let mut pow_v: Vec<Vec<CycloElem>> = Vec::with_capacity(4);
    for j in 0..4 {
        pow_u.push(powers(&coord_u[j], d, m));
        pow_v.push(powers(&coord_v[j], d, m));
    }
    let mut binom = BigInt::one();
    for e in 0..=d {
        let mut coeff = CycloElem::zero(m);
        for j in 0..4 {
            let term = pow_u[j][e as usize]
                .mul(&pow_v[j][(d - e) as usize])
                .scale(&(&binom * BigInt::from(sign[j])));
            coeff = coeff.add(&term);
        }
        if !coeff.is_zero_mod(&phi) {
            return Ok(false);
        }
        // C(d, e+1) = C(d, e)·(d−e)/(e+1)
        binom = binom * BigInt::from(d - e) / BigInt::from(e + 1);
    }
    Ok(true)
}

fn powers(base: &CycloElem, up_to: u32, m: u32) -> Vec<CycloElem> {
    let mut out = Vec::with_capacity(up_to as usize + 1);
    out.push(CycloElem::one(m));
    for e in 1..=up_to as usize {
        out.push(out[e - 1].mul(base));
    }
    out
}

/// Whether the enumerated line lies on the surface (it always does; this is
/// the oracle's membership check run over the defining plane pair).
pub fn on_surface(params: &SurfaceParams, l: LineId) -> bool {
    plane_pair_on_surface(params, &planes_of(params, l)).expect("defining plane pairs have rank 2")
}

/// The determinant of the 4×4 matrix of the two lines' plane coefficients,
/// as a representative in Z[x]/(x^{2d} − 1).
fn incidence_determinant(params: &SurfaceParams, a: LineId, b: LineId) -> CycloElem {
    let pa = planes_of(params, a);
    let pb = planes_of(params, b);
    let rows: [&[CycloElem; 4]; 4] = [&pa.rows()[0], &pa.rows()[1], &pb.rows()[0], &pb.rows()[1]];
    det4(&rows, 2 * params.d())
}

fn det4(rows: &[&[CycloElem; 4]; 4], m: u32) -> CycloElem {
    let det3 = |r: [[&CycloElem; 3]; 3]| -> CycloElem {
        let t0 = r[1][1].mul(r[2][2]).sub(&r[1][2].mul(r[2][1]));
        let t1 = r[1][0].mul(r[2][2]).sub(&r[1][2].mul(r[2][0]));
        let t2 = r[1][0].mul(r[2][1]).sub(&r[1][1].mul(r[2][0]));
        r[0][0]
            .mul(&t0)
            .sub(&r[0][1].mul(&t1))
            .add(&r[0][2].mul(&t2))
    };
    let mut total = CycloElem::zero(m);
    let mut sign = 1i64;
    for c in 0..4 {
        let pick = |row: usize| -> [&CycloElem; 3] {
            let mut it = (0..4).filter(|&cc| cc != c).map(|cc| &rows[row][cc]);
            [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
        };
        let minor = det3([pick(1), pick(2), pick(3)]);
        let term = rows[0][c].mul(&minor);
        total = if sign > 0 {
            total.add(&term)
        } else {
            total.sub(&term)
        };
        sign = -sign;
    }
    total
}

fn check_pair(params: &SurfaceParams, a: LineId, b: LineId) -> Result<()> {
    let d = params.d();
    if !a.in_range(d) {
        return Err(Error::LineOutOfRange(a, d));
    }
    if !b.in_range(d) {
        return Err(Error::LineOutOfRange(b, d));
    }
    if a == b {
        return Err(Error::IdenticalLines(a));
    }
    Ok(())
}

/// Exact geometric incidence: two distinct lines of P³ meet iff the 4×4
/// matrix of their plane coefficients is singular.
pub fn meets_geometric(params: &SurfaceParams, a: LineId, b: LineId) -> Result<bool> {
    check_pair(params, a, b)?;
    let phi = cyclotomic_polynomial(2 * params.d())?;
    Ok(incidence_determinant(params, a, b).is_zero_mod(&phi))
}

/// Multi-prime fast path: evaluate the incidence determinant at an element of
/// multiplicative order 2d modulo each prime `p ≡ 1 (mod 2d)`. A nonzero
/// value modulo any prime certifies non-intersection; all-zero falls back to
/// the exact check before answering true.
pub fn meets_modular(params: &SurfaceParams, a: LineId, b: LineId, primes: &[u64]) -> Result<bool> {
    check_pair(params, a, b)?;
    let m = 2 * params.d();
    if primes.len() < 3 {
        return Err(Error::TooFewPrimes(primes.len()));
    }
    for &p in primes {
        if p % m as u64 != 1 {
            return Err(Error::InvalidPrime { p, m });
        }
    }
    let det = incidence_determinant(params, a, b);
    for &p in primes {
        let p_big = BigInt::from(p);
        let g = element_of_order(p, m as u64);
        let mut acc = 0u64;
        let mut power = 1u64;
        for c in det.coeffs() {
            let c_mod = u64::try_from(((c % &p_big) + &p_big) % &p_big).unwrap();
            acc = ((acc as u128 + c_mod as u128 * power as u128) % p as u128) as u64;
            power = (power as u128 * g as u128 % p as u128) as u64;
        }
        if acc != 0 {
            return Ok(false);
        }
    }
    meets_geometric(params, a, b)
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut out = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            out = (out as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest element of multiplicative order exactly `m` in F_p. Requires
/// `p ≡ 1 (mod m)`, `p` prime.
fn element_of_order(p: u64, m: u64) -> u64 {
    let cof = (p - 1) / m;
    let factors = prime_factors(m);
    for h in 2..p {
        let g = pow_mod(h, cof, p);
        if g != 1 && factors.iter().all(|&q| pow_mod(g, m / q, p) != 1) {
            return g;
        }
    }
    unreachable!("F_p is cyclic and m divides p-1");
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// The `count` smallest primes congruent to 1 mod 2d, suitable for
/// [`meets_modular`].
pub fn oracle_primes(d: u32, count: usize) -> Vec<u64> {
    let m = 2 * d as u64;
    (1..)
        .map(|t| m * t + 1)
        .filter(|&p| is_prime(p))
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line::{enumerate_lines, meets_raw};

    fn p(d: u32) -> SurfaceParams {
        SurfaceParams::canonical(d).unwrap()
    }

    fn l(s: u32, k: u32, i: u32) -> LineId {
        LineId::new(100, Stratum::from_index(s).unwrap(), k, i).unwrap()
    }

    #[test]
    fn planes_examples() {
        // d=3, L0_{0,0}: (y − x, w − z).
        let m = 6;
        let pp = planes_of(&p(3), l(0, 0, 0));
        let minus_one = CycloElem::one(m).neg();
        assert_eq!(pp.rows()[0][0], minus_one);
        assert_eq!(pp.rows()[0][1], CycloElem::one(m));
        assert_eq!(pp.rows()[1][2], minus_one);
        assert_eq!(pp.rows()[1][3], CycloElem::one(m));

        // d=5, L1_{2,3}: (x − ζ^{10}z, y − ζ^6 w); ζ^{10} = 1, so the first
        // plane is x − z.
        let m = 10;
        let phi = cyclotomic_polynomial(m).unwrap();
        let pp = planes_of(&p(5), l(1, 2, 3));
        let z_coeff = &pp.rows()[0][2]; // −ζ^{10}
        assert!(z_coeff.add(&CycloElem::one(m)).is_zero_mod(&phi));
        assert_eq!(pp.rows()[1][3], CycloElem::zeta_pow(m, 6).neg());

        // d=4, L2_{0,0} with c'=1: (x − ζw, y − ζz).
        let m = 8;
        let pp = planes_of(&p(4), l(2, 0, 0));
        assert_eq!(pp.rows()[0][3], CycloElem::zeta_pow(m, 1).neg());
        assert_eq!(pp.rows()[1][2], CycloElem::zeta_pow(m, 1).neg());
    }

    #[test]
    fn all_lines_lie_on_the_surface() {
        for d in 3..=5 {
            let params = p(d);
            for line in enumerate_lines(&params) {
                assert!(on_surface(&params, line), "d={d}, {line}");
            }
        }
    }

    #[test]
    fn ad_hoc_plane_pairs_off_the_surface() {
        let params = p(3);
        let m = 6;
        let one = CycloElem::one(m);
        let zero = CycloElem::zero(m);
        // (y − x, w − 2z): 1 − 1 − 2³ + 1 ≠ 0.
        let pp = PlanePair::from_rows([
            [one.neg(), one.clone(), zero.clone(), zero.clone()],
            [
                zero.clone(),
                zero.clone(),
                CycloElem::from_int(m, -2),
                one.clone(),
            ],
        ]);
        assert!(!plane_pair_on_surface(&params, &pp).unwrap());
        // (x, y): the stratifying line, not on the surface.
        let pp = PlanePair::from_rows([
            [one.clone(), zero.clone(), zero.clone(), zero.clone()],
            [zero.clone(), one.clone(), zero.clone(), zero.clone()],
        ]);
        assert!(!plane_pair_on_surface(&params, &pp).unwrap());
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let params = p(3);
        let m = 6;
        let one = CycloElem::one(m);
        let zero = CycloElem::zero(m);
        let row = [one.clone(), zero.clone(), zero.clone(), zero.clone()];
        let twice = [
            CycloElem::from_int(m, 2),
            zero.clone(),
            zero.clone(),
            zero.clone(),
        ];
        let pp = PlanePair::from_rows([row, twice]);
        assert!(matches!(
            plane_pair_on_surface(&params, &pp),
            Err(Error::DegeneratePlanes)
        ));
    }

    #[test]
    fn geometric_examples() {
        let d5 = p(5);
        assert!(meets_geometric(&d5, l(0, 0, 4), l(0, 0, 1)).unwrap());
        assert!(!meets_geometric(&d5, l(0, 0, 4), l(0, 2, 0)).unwrap());
        assert!(matches!(
            meets_geometric(&d5, l(0, 0, 4), l(0, 0, 4)),
            Err(Error::IdenticalLines(_))
        ));
        // The even-d case distinguishes the two plane conventions for L2.
        let d4 = p(4);
        assert!(meets_geometric(&d4, l(1, 0, 0), l(2, 3, 0)).unwrap());
        assert!(!meets_geometric(&d4, l(1, 2, 0), l(2, 2, 3)).unwrap());
    }

    #[test]
    fn determinant_verdict_is_basis_independent() {
        let params = p(5);
        let phi = cyclotomic_polynomial(10).unwrap();
        let cases = [
            (l(0, 0, 4), l(0, 0, 1)),
            (l(0, 0, 4), l(0, 2, 0)),
            (l(1, 2, 3), l(2, 0, 0)),
        ];
        for (a, b) in cases {
            let pa = planes_of(&params, a);
            let pb = planes_of(&params, b);
            let all = [
                pa.rows()[0].clone(),
                pa.rows()[1].clone(),
                pb.rows()[0].clone(),
                pb.rows()[1].clone(),
            ];
            let base = det4(&[&all[0], &all[1], &all[2], &all[3]], 10).is_zero_mod(&phi);
            for perm in [[1usize, 0, 2, 3], [2, 3, 0, 1], [3, 1, 2, 0], [0, 2, 1, 3]] {
                let vd = det4(
                    &[&all[perm[0]], &all[perm[1]], &all[perm[2]], &all[perm[3]]],
                    10,
                )
                .is_zero_mod(&phi);
                assert_eq!(vd, base);
            }
        }
    }

    #[test]
    fn oracle_matches_rules_small() {
        for d in [3u32, 4] {
            let params = p(d);
            let lines = enumerate_lines(&params);
            for (x, &a) in lines.iter().enumerate() {
                for &b in &lines[x + 1..] {
                    assert_eq!(
                        meets_geometric(&params, a, b).unwrap(),
                        meets_raw(&params, a, b),
                        "d={d}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn modular_fast_path() {
        let d5 = p(5);
        let primes = [11u64, 31, 41];
        assert!(!meets_modular(&d5, l(0, 0, 4), l(0, 2, 0), &primes).unwrap());
        assert!(meets_modular(&d5, l(0, 0, 4), l(0, 0, 1), &primes).unwrap());
        // Preconditions.
        assert!(matches!(
            meets_modular(&d5, l(0, 0, 4), l(0, 2, 0), &[11, 31]),
            Err(Error::TooFewPrimes(2))
        ));
        assert!(matches!(
            meets_modular(&d5, l(0, 0, 4), l(0, 2, 0), &[11, 31, 43]),
            Err(Error::InvalidPrime { p: 43, m: 10 })
        ));
        // d=4: primes ≡ 1 (mod 8) accepted.
        let d4 = p(4);
        assert!(meets_modular(&d4, l(1, 0, 0), l(2, 3, 0), &[17, 41, 73]).unwrap());
    }

    #[test]
    fn modular_never_disagrees_with_geometric() {
        let params = p(5);
        let primes = oracle_primes(5, 3);
        assert_eq!(primes, vec![11, 31, 41]);
        let lines = enumerate_lines(&params);
        for (x, &a) in lines.iter().enumerate().take(20) {
            for &b in lines[x + 1..].iter().take(30) {
                assert_eq!(
                    meets_modular(&params, a, b, &primes).unwrap(),
                    meets_geometric(&params, a, b).unwrap()
                );
            }
        }
    }

    /// The rule table stays geometrically correct for non-canonical
    /// admissible choices of v, not just the defaults.
    #[test]
    fn oracle_matches_rules_for_other_v() {
        for (d, c) in [(4u32, 3u32), (5, 2), (6, 5)] {
            let params = SurfaceParams::with_v_exponent(d, c).unwrap();
            let lines = enumerate_lines(&params);
            for (x, &a) in lines.iter().enumerate() {
                for &b in &lines[x + 1..] {
                    assert_eq!(
                        meets_geometric(&params, a, b).unwrap(),
                        meets_raw(&params, a, b),
                        "d={d} c={c}: {a} vs {b}"
                    );
                }
            }
        }
    }
}
