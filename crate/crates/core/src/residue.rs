//! Residue arithmetic on `R_d = {0, .., d-1}` and the index maps that govern
//! line incidence: `psi_d(k,i) = k+2i`, `phi_{d,±}(k,i) = i±k`, all mod d.
//!
//! Root-of-unity data is exponent-only here: a d-th root of unity `η^e` is
//! represented by the residue `e`, and the chosen d-th root `v` of −1 by the
//! residue `c` with `v² = η^c`.

use crate::error::{Error, Result};

/// A residue in `R_d`; the modulus `d` is carried by context.
pub type Residue = u32;

/// Degree of the surface plus the choice of `v` (as the residue `c` with
/// `v² = η^c`), which fixes the L¹–L² incidence rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceParams {
    d: u32,
    c: Residue,
}

impl SurfaceParams {
    /// The canonical choice of `v`: `v = −1` for odd `d` (so `c = 0`) and
    /// `v = e^{iπ/d}` for even `d` (so `c = 1`).
    pub fn canonical(d: u32) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidDegree(d as i64));
        }
        Ok(Self {
            d,
            c: if d.is_multiple_of(2) { 1 } else { 0 },
        })
    }

    /// Explicit choice of `c` with `v² = η^c`. For even `d` the d-th roots of
    /// −1 are `ζ^odd` (ζ a primitive 2d-th root), so `c` must be odd; for odd
    /// `d` they are `−η^m`, so every residue is admissible.
    pub fn with_v_exponent(d: u32, c: Residue) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidDegree(d as i64));
        }
        if c >= d {
            return Err(Error::ResidueOutOfRange { value: c, d });
        }
        if d.is_multiple_of(2) && c.is_multiple_of(2) {
            return Err(Error::InvalidVExponent { c, d });
        }
        Ok(Self { d, c })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// The residue `c` with `v² = η^c`.
    pub fn c(&self) -> Residue {
        self.c
    }

    /// Reduce a signed integer into `R_d`.
    pub fn reduce(&self, a: i64) -> Residue {
        a.rem_euclid(self.d as i64) as Residue
    }

    /// The odd exponent `c'` with `v = ζ^{c'}` for a primitive 2d-th root ζ.
    /// Since `v² = ζ^{2c'} = η^{c'}`, we need `c' ≡ c (mod d)` with `c'` odd.
    pub fn v_zeta_exponent(&self) -> u32 {
        if self.c % 2 == 1 {
            self.c
        } else {
            // d is odd here (even d forces odd c), so c + d is odd.
            self.c + self.d
        }
    }
}

/// Remainder of `a` by `d`, correct for negative `a`.
pub fn reduce(a: i64, d: i64) -> Result<Residue> {
    if d <= 0 {
        return Err(Error::InvalidDegree(d));
    }
    Ok(a.rem_euclid(d) as Residue)
}

fn check_range(d: u32, r: Residue) {
    assert!(r < d, "residue {r} out of range for R_{d}");
}

/// `psi_d(k, i) = r_d(k + 2i)`.
pub fn psi(d: u32, k: Residue, i: Residue) -> Residue {
    check_range(d, k);
    check_range(d, i);
    (k + 2 * i) % d
}

/// `phi_{d,+}(k, i) = r_d(i + k)`.
pub fn phi_plus(d: u32, k: Residue, i: Residue) -> Residue {
    check_range(d, k);
    check_range(d, i);
    (i + k) % d
}

/// `phi_{d,-}(k, i) = r_d(i - k)`.
pub fn phi_minus(d: u32, k: Residue, i: Residue) -> Residue {
    check_range(d, k);
    check_range(d, i);
    (d + i - k) % d
}
