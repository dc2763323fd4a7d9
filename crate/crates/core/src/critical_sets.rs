//! Geometry of the critical curves in the `(r, l)` plane: extremum and
//! intersection points of `g1`/`g2`, parameter thresholds separating the
//! qualitative regimes, mode counters, domain sizes carrying
//! codimension-two coincidences, and the regime classification.

use crate::error::{Error, Result};
use crate::poly;
use crate::spectrum::{self, LinearData};

/// Default absolute tolerance for the integer-membership tests in the
/// regime classification. These conditions are measure-zero; exact hits
/// come from constructed parameters, not sampling.
pub const INTEGRALITY_TOL: f64 = 1e-9;

/// Tolerance on the re-verified defining equalities of codim-2 points.
pub const COINCIDENCE_TOL: f64 = 1e-9;

/// Relative scale gap below which two coincidences with a shared Hopf
/// mode count as one triple point.
pub const TRIPLE_MERGE_TOL: f64 = 1e-5;

/// Landmark abscissas of `g1` and `g2` (arguments are `x = n^2/l^2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricAux {
    /// Arg-max of `g1` in `(0, a0/d1)`.
    pub x_hat: f64,
    /// Unique intersection of `g1` and `g2` in `(0, a0/d1)`.
    pub x_bar: f64,
    /// Peak value `g1(x_hat)`.
    pub g1_at_xhat: f64,
    /// Lower solution of `a0 = g1(x)`, present iff `a0 < g1(x_hat)`.
    pub x_minus: Option<f64>,
    /// Upper solution of `a0 = g1(x)`, present iff `a0 < g1(x_hat)`.
    pub x_plus: Option<f64>,
}

pub fn aux_points(ld: &LinearData) -> Result<GeometricAux> {
    let (a0, b0, d1, d2) = (ld.a0, ld.b0, ld.d1, ld.d2);
    if a0 <= 0.0 {
        return Err(Error::RegimeError(format!(
            "aux points need a0 > 0, got {a0}"
        )));
    }
    let x_hat = ((a0 + b0) + (b0 * (a0 + b0)).sqrt()) / d1;
    let disc_bar = ((d1 + d2) * b0).powi(2) + 4.0 * d1 * d2 * a0 * b0;
    let x_bar = (2.0 * d1 * a0 + (d1 + d2) * b0 + disc_bar.max(0.0).sqrt()) / (2.0 * d1 * d1);
    let g1_at_xhat = ld.g1(x_hat);

    let (x_minus, x_plus) = if a0 < g1_at_xhat {
        let disc = ((d1 + d2) * a0).powi(2) + 4.0 * d1 * d2 * a0 * b0;
        let s = disc.max(0.0).sqrt();
        (
            Some(((d2 - d1) * a0 - s) / (2.0 * d1 * d2)),
            Some(((d2 - d1) * a0 + s) / (2.0 * d1 * d2)),
        )
    } else {
        (None, None)
    };

    Ok(GeometricAux {
        x_hat,
        x_bar,
        g1_at_xhat,
        x_minus,
        x_plus,
    })
}

/// Thresholds in `(a, b)` controlling the sign of `a0 - g1(x_hat)`
/// when `d1 < d2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    pub b_star: f64,
    pub a_minus: Option<f64>,
    pub a_plus: Option<f64>,
}

impl RegimeThresholds {
    /// The `a`-window bounds, or `NotApplicable` where they do not exist.
    pub fn require_a_bounds(&self) -> Result<(f64, f64)> {
        match (self.a_minus, self.a_plus) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(Error::NotApplicable(
                "a thresholds need d1 < d2 and b <= b_star".into(),
            )),
        }
    }
}

/// `h3(a) = (P^2 - Q^2) a^2 + 2 P^2 (b - 1) a + P^2 (b + 1)^2` with
/// `P = (d1 + d2)^2`, `Q = (d1 - d2)^2`; its sign equals the sign of
/// `a0 - g1(x_hat)` when `d1 < d2`.
pub fn h3(a: f64, b: f64, d1: f64, d2: f64) -> f64 {
    let p = (d1 + d2).powi(2);
    let q = (d1 - d2).powi(2);
    (p * p - q * q) * a * a + 2.0 * p * p * (b - 1.0) * a + p * p * (b + 1.0).powi(2)
}

pub fn regime_thresholds(b: f64, d1: f64, d2: f64) -> RegimeThresholds {
    let p = (d1 + d2).powi(2);
    let q = (d1 - d2).powi(2);
    // Cancellation-free form of ((P - sqrt(P^2 - Q^2)) / Q)^2.
    let b_star = q * q / (p + (p * p - q * q).max(0.0).sqrt()).powi(2);

    if d1 >= d2 {
        return RegimeThresholds {
            b_star,
            a_minus: None,
            a_plus: None,
        };
    }
    let disc = (b + 1.0).powi(2) * q * q - 4.0 * b * p * p;
    if disc < 0.0 {
        return RegimeThresholds {
            b_star,
            a_minus: None,
            a_plus: None,
        };
    }
    let s = p * disc.sqrt();
    let den = p * p - q * q;
    RegimeThresholds {
        b_star,
        a_minus: Some(((1.0 - b) * p * p - s) / den),
        a_plus: Some(((1.0 - b) * p * p + s) / den),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakOrdering {
    Less,
    Equal,
    Greater,
}

/// Sign of `a0 - g1(x_hat)` decided through `h3` when `d1 < d2`
/// (`Greater` unconditionally when `d1 >= d2`). `Equal` means `|h3|`
/// below `1e-9` of its coefficient scale.
pub fn compare_a0_g1hat(a: f64, b: f64, d1: f64, d2: f64) -> PeakOrdering {
    if d1 >= d2 {
        return PeakOrdering::Greater;
    }
    let p = (d1 + d2).powi(2);
    let q = (d1 - d2).powi(2);
    let scale = (p * p - q * q) * a * a + 2.0 * p * p * (1.0 + b) * a + p * p * (b + 1.0).powi(2);
    let v = h3(a, b, d1, d2);
    if v.abs() <= 1e-9 * scale {
        PeakOrdering::Equal
    } else if v > 0.0 {
        PeakOrdering::Greater
    } else {
        PeakOrdering::Less
    }
}

/// The four critical domain scales attached to mode `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLengths {
    /// Scale at which the oscillatory and steady-state curves of mode
    /// `n` cross (`n^2/l^2 = x_bar`).
    pub l_h: f64,
    /// Scale above which `r_n^T` is positive (`n^2/l^2 = a0/d1`).
    pub l_t: f64,
    /// Scale at which `r_n^T = a0` from above (`n^2/l^2 = x_minus`).
    pub l_minus: Option<f64>,
    /// Scale at which `r_n^T = a0` from below (`n^2/l^2 = x_plus`).
    pub l_plus: Option<f64>,
}

pub fn critical_lengths(ld: &LinearData, n: u32) -> Result<CriticalLengths> {
    let aux = aux_points(ld)?;
    let n = n as f64;
    Ok(CriticalLengths {
        l_h: n / aux.x_bar.sqrt(),
        l_t: n * (ld.d1 / ld.a0).sqrt(),
        l_minus: aux.x_minus.map(|x| n / x.sqrt()),
        l_plus: aux.x_plus.map(|x| n / x.sqrt()),
    })
}

/// Mode counters at a fixed domain scale. `n1`/`n2` bracket the scale
/// between consecutive critical lengths (left-strict, right-inclusive);
/// `m1..=m2` is the window of modes with `r_n^T > a0`, present only when
/// `x_minus`/`x_plus` exist, empty iff `m1 > m2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeCounts {
    pub n1: u32,
    pub n2: u32,
    pub m1: Option<u32>,
    pub m2: Option<u32>,
}

pub fn mode_counts(ld: &LinearData, l: f64) -> Result<ModeCounts> {
    let aux = aux_points(ld)?;
    let n1 = ((l * aux.x_bar.sqrt()).ceil() - 1.0).max(0.0) as u32;
    let n2 = spectrum::n2_count(ld, l);
    let m1 = aux.x_minus.map(|x| (l * x.sqrt()).floor() as u32 + 1);
    let m2 = aux
        .x_plus
        .map(|x| ((l * x.sqrt()).ceil() - 1.0).max(0.0) as u32);
    Ok(ModeCounts { n1, n2, m1, m2 })
}

/// A domain scale where two steady-state curves cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuringTuringPoint {
    pub l: f64,
    pub r: f64,
    pub modes: (u32, u32),
}

/// A domain scale where an oscillatory curve meets a steady-state curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuringHopfCoincidence {
    pub l: f64,
    pub r: f64,
    pub hopf_mode: u32,
    pub turing_mode: u32,
}

/// A domain scale where one oscillatory and two steady-state curves meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleCoincidence {
    pub l: f64,
    pub r: f64,
    pub hopf_mode: u32,
    pub turing_modes: (u32, u32),
}

/// The finite codimension-two coincidence sets inside a window of
/// domain scales, sorted by `(l, modes)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CodimTwoSets {
    pub tt: Vec<TuringTuringPoint>,
    pub th: Vec<TuringHopfCoincidence>,
    pub tth: Vec<TripleCoincidence>,
}

impl CodimTwoSets {
    /// Distinct `l` values of a family, merged at relative tolerance
    /// `tol` (entries can share an `l`).
    pub fn l_values(list: &[f64], tol: f64) -> Vec<f64> {
        let mut v = list.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| (*a - *b).abs() <= tol * a.abs().max(1.0));
        v
    }

    pub fn tt_lengths(&self, tol: f64) -> Vec<f64> {
        Self::l_values(&self.tt.iter().map(|p| p.l).collect::<Vec<_>>(), tol)
    }

    pub fn th_lengths(&self, tol: f64) -> Vec<f64> {
        Self::l_values(&self.th.iter().map(|p| p.l).collect::<Vec<_>>(), tol)
    }

    pub fn tth_lengths(&self, tol: f64) -> Vec<f64> {
        Self::l_values(&self.tth.iter().map(|p| p.l).collect::<Vec<_>>(), tol)
    }
}

// (c0 + c1 s)(e0 + e1 s) as quadratic coefficients.
fn lin_mul(c: (f64, f64), e: (f64, f64)) -> [f64; 3] {
    [c.0 * e.0, c.0 * e.1 + c.1 * e.0, c.1 * e.1]
}

/// Enumerates every codimension-two coincidence with `l` in the window.
/// Each pairwise equality is cleared of denominators into a quadratic in
/// `s = 1/l^2`, solved by companion-matrix eigenvalues, then every root
/// is re-verified against the defining equalities and the mode-index
/// bracketing before being admitted.
pub fn enumerate_codim2(ld: &LinearData, l_lo: f64, l_hi: f64) -> Result<CodimTwoSets> {
    if !(l_lo > 0.0 && l_hi > l_lo && l_hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "window must satisfy 0 < l_lo < l_hi < inf, got [{l_lo}, {l_hi}]"
        )));
    }
    if ld.a0 <= 0.0 {
        return Err(Error::WindowEmpty(l_lo, l_hi));
    }
    let (a0, b0, d1, d2) = (ld.a0, ld.b0, ld.d1, ld.d2);
    let n2_max = spectrum::n2_count(ld, l_hi);
    if n2_max < 1 {
        return Err(Error::WindowEmpty(l_lo, l_hi));
    }
    let counts_hi = mode_counts(ld, l_hi)?;
    let n1_max = counts_hi.n1;

    let s_lo = 1.0 / (l_hi * l_hi);
    let s_hi = 1.0 / (l_lo * l_lo);
    let mut sets = CodimTwoSets::default();

    // Steady-state / steady-state crossings:
    // i^2 (a0 - d1 i^2 s)(d1 j^2 s - a0 - b0) = j^2 (a0 - d1 j^2 s)(d1 i^2 s - a0 - b0)
    for i in 1..n2_max {
        for j in (i + 1)..=n2_max {
            let (fi, fj) = ((i * i) as f64, (j * j) as f64);
            let lhs = lin_mul((a0, -d1 * fi), (-a0 - b0, d1 * fj));
            let rhs = lin_mul((a0, -d1 * fj), (-a0 - b0, d1 * fi));
            let coeffs = [
                fi * lhs[0] - fj * rhs[0],
                fi * lhs[1] - fj * rhs[1],
                fi * lhs[2] - fj * rhs[2],
            ];
            for s in poly::real_roots_in(&coeffs, s_lo, s_hi) {
                if s <= 0.0 {
                    continue;
                }
                let l = 1.0 / s.sqrt();
                let ri = spectrum::turing_curve(ld, i, l)?;
                let rj = spectrum::turing_curve(ld, j, l)?;
                let n2_here = spectrum::n2_count(ld, l);
                if (ri - rj).abs() < COINCIDENCE_TOL && ri > 0.0 && j <= n2_here {
                    sets.tt.push(TuringTuringPoint {
                        l,
                        r: 0.5 * (ri + rj),
                        modes: (i, j),
                    });
                }
            }
        }
    }

    // Oscillatory / steady-state crossings:
    // (a0 - (d1 + d2) i^2 s)(d1 j^2 s - a0 - b0) = d2 j^2 s (a0 - d1 j^2 s)
    for i in 0..=n1_max {
        for j in 1..=n2_max {
            let (fi, fj) = ((i * i) as f64, (j * j) as f64);
            let lhs = lin_mul((a0, -(d1 + d2) * fi), (-a0 - b0, d1 * fj));
            let rhs = lin_mul((0.0, d2 * fj), (a0, -d1 * fj));
            let coeffs = [lhs[0] - rhs[0], lhs[1] - rhs[1], lhs[2] - rhs[2]];
            for s in poly::real_roots_in(&coeffs, s_lo, s_hi) {
                if s <= 0.0 {
                    continue;
                }
                let l = 1.0 / s.sqrt();
                let rh = spectrum::hopf_curve(ld, i, l);
                let rt = spectrum::turing_curve(ld, j, l)?;
                let counts = mode_counts(ld, l)?;
                if (rh - rt).abs() < COINCIDENCE_TOL
                    && rh > 0.0
                    && i <= counts.n1
                    && counts.n1 < j
                    && j <= counts.n2
                {
                    sets.th.push(TuringHopfCoincidence {
                        l,
                        r: 0.5 * (rh + rt),
                        hopf_mode: i,
                        turing_mode: j,
                    });
                }
            }
        }
    }

    // Triple coincidences: two oscillatory/steady-state entries with the
    // same Hopf mode merging at one domain scale. Published parameter
    // sets round an exact construction, so the two underlying roots can
    // split by ~1e-6; cluster at the merge tolerance instead of asking
    // the second equality to hold to solver precision.
    let mut th_sorted = sets.th.clone();
    th_sorted.sort_by(|a, b| {
        (a.hopf_mode, a.l, a.turing_mode)
            .partial_cmp(&(b.hopf_mode, b.l, b.turing_mode))
            .unwrap()
    });
    for (idx, first) in th_sorted.iter().enumerate() {
        for second in th_sorted.iter().skip(idx + 1) {
            if second.hopf_mode != first.hopf_mode {
                continue;
            }
            if (second.l - first.l).abs() > TRIPLE_MERGE_TOL * first.l.abs().max(1.0)
                || (second.r - first.r).abs() > TRIPLE_MERGE_TOL * first.r.abs().max(1.0)
                || second.turing_mode == first.turing_mode
            {
                continue;
            }
            let (j, k) = if first.turing_mode < second.turing_mode {
                (first.turing_mode, second.turing_mode)
            } else {
                (second.turing_mode, first.turing_mode)
            };
            sets.tth.push(TripleCoincidence {
                l: 0.5 * (first.l + second.l),
                r: 0.5 * (first.r + second.r),
                hopf_mode: first.hopf_mode,
                turing_modes: (j, k),
            });
        }
    }

    let key = |l: f64, m: (u32, u32)| (l, m);
    sets.tt
        .sort_by(|a, b| key(a.l, a.modes).partial_cmp(&key(b.l, b.modes)).unwrap());
    sets.th.sort_by(|a, b| {
        (a.l, a.hopf_mode, a.turing_mode)
            .partial_cmp(&(b.l, b.hopf_mode, b.turing_mode))
            .unwrap()
    });
    sets.tth.sort_by(|a, b| {
        (a.l, a.hopf_mode, a.turing_modes)
            .partial_cmp(&(b.l, b.hopf_mode, b.turing_modes))
            .unwrap()
    });
    sets.tth.dedup_by(|a, b| {
        (a.l - b.l).abs() <= TRIPLE_MERGE_TOL * a.l.abs().max(1.0)
            && a.hopf_mode == b.hopf_mode
            && a.turing_modes == b.turing_modes
    });
    Ok(sets)
}

/// Windows of domain scales sharing the mode counters of `l`: `s1`
/// keeps the steady-state counter fixed, `s2` additionally keeps the
/// oscillatory counter fixed (it can be empty).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketWindows {
    pub s1: (f64, f64),
    pub s2: Option<(f64, f64)>,
}

pub fn bracket_windows(ld: &LinearData, l: f64) -> Result<BracketWindows> {
    let counts = mode_counts(ld, l)?;
    let aux = aux_points(ld)?;
    let l_t = |n: u32| n as f64 * (ld.d1 / ld.a0).sqrt();
    let l_h = |n: u32| n as f64 / aux.x_bar.sqrt();
    let s1 = (l_t(counts.n2), l_t(counts.n2 + 1));
    let lo2 = s1.0.max(l_h(counts.n1));
    let hi2 = s1.1.min(l_h(counts.n1 + 1));
    Ok(BracketWindows {
        s1,
        s2: (lo2 < hi2).then_some((lo2, hi2)),
    })
}

/// The coincidence sets attached to the brackets of `l`: the
/// steady/steady family over `s1`, the others over `s2`.
pub fn codim2_at(ld: &LinearData, l: f64) -> Result<CodimTwoSets> {
    let win = bracket_windows(ld, l)?;
    let tiny = 1e-6 * l;
    let mut out = match enumerate_codim2(ld, win.s1.0.max(tiny), win.s1.1) {
        Ok(sets) => CodimTwoSets {
            tt: sets.tt,
            ..Default::default()
        },
        Err(Error::WindowEmpty(..)) => CodimTwoSets::default(),
        Err(e) => return Err(e),
    };
    if let Some((lo, hi)) = win.s2 {
        match enumerate_codim2(ld, lo.max(tiny), hi) {
            Ok(sets) => {
                out.th = sets.th;
                out.tth = sets.tth;
            }
            Err(Error::WindowEmpty(..)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Qualitative regime of the parameter set at a fixed domain scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    /// Domain too small for any steady-state instability.
    A1,
    /// Prey diffuses at least as fast as the predator.
    A2,
    /// `b` above `b_star`.
    A3,
    /// `a` outside the `[a_minus, a_plus]` window.
    A4,
    /// `a` on the window boundary, peak not hit by an integer mode.
    A5,
    /// `a` on the window boundary, peak hit by an integer mode.
    A5Prime,
    /// `a` inside the window, no mode in `(x_minus, x_plus)`.
    A6,
    /// `a` inside the window, a mode exactly on `x_minus` or `x_plus`.
    A6Prime,
    /// `a` inside the window and some mode strictly between.
    A6DoublePrime,
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegimeLabel::A1 => "A1",
            RegimeLabel::A2 => "A2",
            RegimeLabel::A3 => "A3",
            RegimeLabel::A4 => "A4",
            RegimeLabel::A5 => "A5",
            RegimeLabel::A5Prime => "A5'",
            RegimeLabel::A6 => "A6",
            RegimeLabel::A6Prime => "A6'",
            RegimeLabel::A6DoublePrime => "A6''",
        };
        f.write_str(s)
    }
}

impl RegimeLabel {
    /// Regimes with `a0 > r_*` (decreasing `r` meets the oscillatory
    /// threshold first).
    pub fn dominant_oscillatory(&self) -> bool {
        matches!(
            self,
            RegimeLabel::A1
                | RegimeLabel::A2
                | RegimeLabel::A3
                | RegimeLabel::A4
                | RegimeLabel::A5
                | RegimeLabel::A6
        )
    }

    /// Regimes with `a0 = r_*`, the codimension-two coincidence family.
    pub fn balanced(&self) -> bool {
        matches!(self, RegimeLabel::A5Prime | RegimeLabel::A6Prime)
    }
}

fn near_positive_integer(x: f64, tol: f64) -> bool {
    x.round() >= 1.0 && (x - x.round()).abs() <= tol
}

pub fn classify_regime(a: f64, b: f64, d1: f64, d2: f64, l: f64) -> Result<RegimeLabel> {
    classify_regime_with_tol(a, b, d1, d2, l, INTEGRALITY_TOL)
}

pub fn classify_regime_with_tol(
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    l: f64,
    integrality_tol: f64,
) -> Result<RegimeLabel> {
    let ld = LinearData::new(a, b, d1, d2);
    if ld.a0 <= 0.0 {
        return Err(Error::RegimeError(format!(
            "classification needs a0 > 0, got {}",
            ld.a0
        )));
    }
    if l <= (d1 / ld.a0).sqrt() {
        return Ok(RegimeLabel::A1);
    }
    if d2 <= d1 {
        return Ok(RegimeLabel::A2);
    }
    let th = regime_thresholds(b, d1, d2);
    if b > th.b_star {
        return Ok(RegimeLabel::A3);
    }
    match compare_a0_g1hat(a, b, d1, d2) {
        PeakOrdering::Greater => Ok(RegimeLabel::A4),
        PeakOrdering::Equal => {
            let aux = aux_points(&ld)?;
            if near_positive_integer(l * aux.x_hat.sqrt(), integrality_tol) {
                Ok(RegimeLabel::A5Prime)
            } else {
                Ok(RegimeLabel::A5)
            }
        }
        PeakOrdering::Less => {
            let aux = aux_points(&ld)?;
            let (xm, xp) = (
                aux.x_minus
                    .expect("ordering Less implies the window exists"),
                aux.x_plus.expect("ordering Less implies the window exists"),
            );
            let counts = mode_counts(&ld, l)?;
            let (m1, m2) = (counts.m1.unwrap(), counts.m2.unwrap());
            if m1 <= m2 {
                Ok(RegimeLabel::A6DoublePrime)
            } else if near_positive_integer(l * xm.sqrt(), integrality_tol)
                || near_positive_integer(l * xp.sqrt(), integrality_tol)
            {
                Ok(RegimeLabel::A6Prime)
            } else {
                Ok(RegimeLabel::A6)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sec3_ld() -> LinearData {
        LinearData::new(0.6018, 0.0077, 0.4, 19.37)
    }

    fn example1_ld() -> LinearData {
        LinearData::new(1.472554, 0.045949, 0.417243, 4.697383)
    }

    #[test]
    fn x_hat_is_a_local_max() {
        let ld = sec3_ld();
        let aux = aux_points(&ld).unwrap();
        let d = 1e-4 * aux.x_hat;
        assert!(ld.g1(aux.x_hat - d) < aux.g1_at_xhat);
        assert!(ld.g1(aux.x_hat + d) < aux.g1_at_xhat);
        assert!(aux.x_hat > 0.0 && aux.x_hat < ld.a0 / ld.d1);
    }

    #[test]
    fn x_bar_intersects_both_curves() {
        for ld in [
            sec3_ld(),
            example1_ld(),
            LinearData::new(2.0, 0.2, 1.0, 3.0),
        ] {
            let aux = aux_points(&ld).unwrap();
            assert!((ld.g1(aux.x_bar) - ld.g2(aux.x_bar)).abs() < 1e-10);
            assert!(aux.x_bar > 0.0 && aux.x_bar < ld.a0 / ld.d1);
        }
    }

    #[test]
    fn x_pm_solve_the_level_equation() {
        let ld = sec3_ld();
        let aux = aux_points(&ld).unwrap();
        let (xm, xp) = (aux.x_minus.unwrap(), aux.x_plus.unwrap());
        assert!(0.0 < xm && xm < xp && xp < ld.a0 / ld.d1);
        assert!((ld.g1(xm) - ld.a0).abs() < 1e-10);
        assert!((ld.g1(xp) - ld.a0).abs() < 1e-10);
    }

    #[test]
    fn x_pm_absent_for_fast_prey() {
        let ld = LinearData::new(2.0, 0.2, 2.0, 1.0);
        let aux = aux_points(&ld).unwrap();
        assert!(aux.x_minus.is_none() && aux.x_plus.is_none());
        assert_eq!(compare_a0_g1hat(2.0, 0.2, 2.0, 1.0), PeakOrdering::Greater);
    }

    #[test]
    fn a_bounds_are_h3_roots() {
        let (b, d1, d2) = (0.0077, 0.4, 19.37);
        let th = regime_thresholds(b, d1, d2);
        let (am, ap) = th.require_a_bounds().unwrap();
        let p = (d1 + d2).powi(2);
        let scale = p * p * (b + 1.0).powi(2);
        assert!(h3(am, b, d1, d2).abs() < 1e-9 * scale.max(1.0) * 1e3);
        assert!(h3(ap, b, d1, d2).abs() < 1e-9 * scale.max(1.0) * 1e3);
        assert!(am < 0.6018 && 0.6018 < ap);
        assert!(th.b_star < 1.0);
    }

    #[test]
    fn equal_diffusion_has_no_a_bounds() {
        let th = regime_thresholds(0.2, 1.0, 1.0);
        assert!(th.a_minus.is_none());
        assert!(matches!(
            th.require_a_bounds(),
            Err(Error::NotApplicable(_))
        ));
        assert!(th.b_star >= 0.0 && th.b_star < 1.0);
    }

    #[test]
    fn boundary_a_compares_equal() {
        let (b, d1, d2) = (0.0077, 0.4, 19.37);
        let (am, ap) = regime_thresholds(b, d1, d2).require_a_bounds().unwrap();
        assert_eq!(compare_a0_g1hat(ap, b, d1, d2), PeakOrdering::Equal);
        assert_eq!(compare_a0_g1hat(am, b, d1, d2), PeakOrdering::Equal);
        let mid = 0.5 * (am + ap);
        assert_eq!(compare_a0_g1hat(mid, b, d1, d2), PeakOrdering::Less);
    }

    #[test]
    fn critical_length_scaling() {
        let ld = sec3_ld();
        let c1 = critical_lengths(&ld, 1).unwrap();
        let c2 = critical_lengths(&ld, 2).unwrap();
        assert!((c2.l_h - 2.0 * c1.l_h).abs() < 1e-12);
        assert!((c1.l_t - (ld.d1 / ld.a0).sqrt()).abs() < 1e-15);
        // The two level scales bracket the critical domain size.
        let (lm, lp) = (c1.l_minus.unwrap(), c1.l_plus.unwrap());
        assert!(lp < 1.593334 + 1e-4 && 1.593334 - 1e-4 < lm);
    }

    #[test]
    fn mode_counts_small_domain() {
        let ld = example1_ld();
        let l = 0.9 * (ld.d1 / ld.a0).sqrt();
        assert_eq!(mode_counts(&ld, l).unwrap().n2, 0);
    }

    #[test]
    fn mode_counts_reference() {
        let counts = mode_counts(&example1_ld(), 3.022593).unwrap();
        assert_eq!((counts.n1, counts.n2), (0, 3));
        let counts = mode_counts(&sec3_ld(), 1.593334).unwrap();
        assert_eq!((counts.n1, counts.n2), (0, 1));
    }

    #[test]
    fn codim2_reference_sets() {
        let ld = example1_ld();
        let sets = codim2_at(&ld, 3.022593).unwrap();

        let tt = sets.tt_lengths(1e-5);
        assert_eq!(tt.len(), 2);
        assert!((tt[0] - 3.022593).abs() < 1e-5);
        assert!((tt[1] - 3.617713).abs() < 1e-5);

        let th = sets.th_lengths(1e-5);
        assert_eq!(th.len(), 1);
        assert!((th[0] - 3.022593).abs() < 1e-5);

        let tth = sets.tth_lengths(1e-5);
        assert_eq!(tth.len(), 1);
        assert!((tth[0] - 3.022593).abs() < 1e-5);
        assert_eq!(sets.tth[0].hopf_mode, 0);
        assert_eq!(sets.tth[0].turing_modes, (1, 3));
    }

    #[test]
    fn codim2_sec3_point() {
        let sets = enumerate_codim2(&sec3_ld(), 1.0, 2.0).unwrap();
        let th = &sets.th;
        assert!(th
            .iter()
            .any(|p| (p.l - 1.593334).abs() < 1e-4 && p.hopf_mode == 0 && p.turing_mode == 1));
    }

    #[test]
    fn codim2_empty_window() {
        let ld = example1_ld();
        let lt1 = (ld.d1 / ld.a0).sqrt();
        assert!(matches!(
            enumerate_codim2(&ld, 0.1 * lt1, 0.9 * lt1),
            Err(Error::WindowEmpty(_, _))
        ));
    }

    #[test]
    fn regime_small_domain() {
        let ld = example1_ld();
        let l = 0.5 * (ld.d1 / ld.a0).sqrt();
        assert_eq!(
            classify_regime(1.472554, 0.045949, 0.417243, 4.697383, l).unwrap(),
            RegimeLabel::A1
        );
    }

    #[test]
    fn regime_fast_prey() {
        // a0 > 0 here and the domain is large.
        assert_eq!(
            classify_regime(2.0, 0.2, 2.0, 1.0, 10.0).unwrap(),
            RegimeLabel::A2
        );
    }

    #[test]
    fn regime_balanced_at_critical_scale() {
        // The exact critical scale makes l*sqrt(x_plus) an integer.
        let ld = sec3_ld();
        let aux = aux_points(&ld).unwrap();
        let l_star = 1.0 / aux.x_plus.unwrap().sqrt();
        assert_eq!(
            classify_regime(0.6018, 0.0077, 0.4, 19.37, l_star).unwrap(),
            RegimeLabel::A6Prime
        );
    }

    #[test]
    fn lemma_regime_is_rejected() {
        assert!(matches!(
            classify_regime(0.1, 0.5, 1.0, 2.0, 1.0),
            Err(Error::RegimeError(_))
        ));
    }
}
