//! Classification of `(r, l)` points on the critical curves and
//! sampling of the two-parameter bifurcation diagram.

use crate::critical_sets::{self, RegimeLabel};
use crate::error::{Error, Result};
use crate::report::fmt_g17;
use crate::spectrum::{self, LinearData};
use std::io::Write;

/// Tolerance on the critical equalities when classifying a point.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Kind of criticality carried by a point, with the participating modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BifKind {
    /// One pure-imaginary pair at mode `n`.
    Hopf(u32),
    /// One zero eigenvalue at mode `n`.
    Turing(u32),
    /// Pair at the first mode, zero at the second.
    TuringHopf(u32, u32),
    /// Two zero eigenvalues; equal modes mark the double-zero case where
    /// trace and determinant of a single mode vanish together.
    TuringTuring(u32, u32),
    /// Pair at the first mode, zeros at the other two.
    HopfDoubleTuring(u32, u32, u32),
    /// Three zero eigenvalues (double zero at mode `n` plus a partner).
    TripleTuring(u32),
}

impl BifKind {
    pub fn modes(&self) -> Vec<u32> {
        match *self {
            BifKind::Hopf(n) | BifKind::Turing(n) | BifKind::TripleTuring(n) => vec![n],
            BifKind::TuringHopf(i, j) | BifKind::TuringTuring(i, j) => vec![i, j],
            BifKind::HopfDoubleTuring(i, j, k) => vec![i, j, k],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BifKind::Hopf(_) => "hopf",
            BifKind::Turing(_) => "turing",
            BifKind::TuringHopf(..) => "turing-hopf",
            BifKind::TuringTuring(..) => "turing-turing",
            BifKind::HopfDoubleTuring(..) => "hopf-double-turing",
            BifKind::TripleTuring(_) => "triple-turing",
        }
    }
}

/// Counts of critical eigenvalues at the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenStructure {
    pub imaginary_pairs: u32,
    pub zero_eigenvalues: u32,
}

/// The existence theorems give necessary stability conditions only, so
/// the positive outcome is "possibly stable"; definitive answers come
/// from the normal form or from simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityNote {
    PossiblyStable,
    Unstable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationPoint {
    pub r: f64,
    pub l: f64,
    pub kind: BifKind,
    pub eigenstructure: EigenStructure,
    pub stability_note: StabilityNote,
    /// Whether `r` sits on the maximum of the steady-state curves.
    pub at_r_star: bool,
}

/// Relative tolerance for matching a query point against an enumerated
/// coincidence entry. Published parameter sets are rounded, so their
/// higher-codimension points miss the exact equalities by far more than
/// the per-curve tolerance.
pub const SET_MEMBERSHIP_TOL: f64 = critical_sets::TRIPLE_MERGE_TOL;

impl BifKind {
    fn implied_eigenstructure(&self) -> EigenStructure {
        let (pairs, zeros) = match self {
            BifKind::Hopf(_) => (1, 0),
            BifKind::Turing(_) => (0, 1),
            BifKind::TuringHopf(..) => (1, 1),
            BifKind::TuringTuring(..) => (0, 2),
            BifKind::HopfDoubleTuring(..) => (1, 2),
            BifKind::TripleTuring(_) => (0, 3),
        };
        EigenStructure {
            imaginary_pairs: pairs,
            zero_eigenvalues: zeros,
        }
    }
}

/// Decides which critical equalities hold at `(r, l)` and names the
/// bifurcation accordingly. Codimension-one hits are matched against
/// the curves directly; higher-codimension labels come from membership
/// in the enumerated coincidence sets. `Ok(None)` means no equality
/// holds.
pub fn classify_point(
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    r: f64,
    l: f64,
) -> Result<Option<BifurcationPoint>> {
    let ld = LinearData::new(a, b, d1, d2);
    if ld.a0 <= 0.0 {
        return Err(Error::RegimeError(format!(
            "classification needs a0 > 0, got {}",
            ld.a0
        )));
    }
    let counts = critical_sets::mode_counts(&ld, l)?;

    let mut hopf_hits: Vec<u32> = Vec::new();
    for i in 0..=counts.n1 {
        if (r - spectrum::hopf_curve(&ld, i, l)).abs() < CLASSIFY_TOL {
            hopf_hits.push(i);
        }
    }
    let mut turing_hits: Vec<u32> = Vec::new();
    for j in 1..=counts.n2 {
        if (r - spectrum::turing_curve(&ld, j, l)?).abs() < CLASSIFY_TOL {
            turing_hits.push(j);
        }
    }
    // Trace and determinant of mode n1+1 can vanish together exactly at
    // the crossing scale of its two critical curves.
    let n_bt = counts.n1 + 1;
    let double_zero = (r - spectrum::hopf_curve(&ld, n_bt, l)).abs() < CLASSIFY_TOL
        && turing_hits.contains(&n_bt);

    let sets = critical_sets::codim2_at(&ld, l)?;
    let near = |x: f64, y: f64| (x - y).abs() <= SET_MEMBERSHIP_TOL * y.abs().max(1.0);
    let tth_hit = sets.tth.iter().find(|e| near(l, e.l) && near(r, e.r));
    let th_hit = sets.th.iter().find(|e| near(l, e.l) && near(r, e.r));
    let tt_hit = sets.tt.iter().find(|e| near(l, e.l) && near(r, e.r));

    let kind = if let Some(e) = tth_hit {
        BifKind::HopfDoubleTuring(e.hopf_mode, e.turing_modes.0, e.turing_modes.1)
    } else if double_zero {
        match (hopf_hits.first(), turing_hits.len()) {
            (None, 1) => BifKind::TuringTuring(n_bt, n_bt),
            (None, _) => BifKind::TripleTuring(n_bt),
            (Some(&i), _) => BifKind::HopfDoubleTuring(i, n_bt, n_bt),
        }
    } else if let Some(e) = th_hit {
        BifKind::TuringHopf(e.hopf_mode, e.turing_mode)
    } else if let Some(e) = tt_hit {
        BifKind::TuringTuring(e.modes.0, e.modes.1)
    } else {
        match (hopf_hits.as_slice(), turing_hits.as_slice()) {
            ([], []) => return Ok(None),
            (&[i, ..], []) => BifKind::Hopf(i),
            ([], &[j, ..]) => BifKind::Turing(j),
            (&[i, ..], &[j, ..]) => BifKind::TuringHopf(i, j),
        }
    };

    let at_r_star = {
        let rs = spectrum::r_star(&ld, l).value;
        (r - rs).abs() <= SET_MEMBERSHIP_TOL * rs.abs().max(1.0)
    };

    let mut point = BifurcationPoint {
        r,
        l,
        kind,
        eigenstructure: kind.implied_eigenstructure(),
        stability_note: StabilityNote::Unstable,
        at_r_star,
    };
    let regime = critical_sets::classify_regime(a, b, d1, d2, l)?;
    point.stability_note = bifurcating_solution_stability(&point, regime);
    Ok(Some(point))
}

/// Necessary stability conditions for the bifurcating solutions, per
/// kind and regime.
pub fn bifurcating_solution_stability(
    point: &BifurcationPoint,
    regime: RegimeLabel,
) -> StabilityNote {
    let ok = match point.kind {
        BifKind::Hopf(n) => n == 0 && regime.dominant_oscillatory(),
        BifKind::Turing(_) => regime == RegimeLabel::A6DoublePrime && point.at_r_star,
        BifKind::TuringHopf(i, _) => regime.balanced() && i == 0,
        BifKind::TuringTuring(i, j) => {
            i != j && regime == RegimeLabel::A6DoublePrime && point.at_r_star
        }
        BifKind::HopfDoubleTuring(i, _, _) => regime.balanced() && i == 0,
        BifKind::TripleTuring(_) => false,
    };
    if ok {
        StabilityNote::PossiblyStable
    } else {
        StabilityNote::Unstable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    Hopf,
    Turing,
}

impl CurveFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            CurveFamily::Hopf => "H",
            CurveFamily::Turing => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    pub family: CurveFamily,
    pub n: u32,
    pub l: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub kind: &'static str,
    pub modes: Vec<u32>,
    pub r: f64,
    pub l: f64,
}

/// Sampled curves plus the located curve intersections in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramSample {
    pub curves: Vec<DiagramPoint>,
    pub intersections: Vec<Intersection>,
}

/// Samples both curve families over the window, refining near each
/// located intersection (they cluster near tangencies). The oscillatory
/// family is only drawn where it carries a genuine pure-imaginary pair,
/// i.e. where `r_n^H(l) > r_n^T(l)`.
pub fn diagram(
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    r_range: (f64, f64),
    l_range: (f64, f64),
    resolution: usize,
) -> Result<DiagramSample> {
    let (r_min, r_max) = r_range;
    let (l_min, l_max) = l_range;
    if !(resolution >= 2 && l_min > 0.0 && l_max > l_min && r_max > r_min) {
        return Err(Error::InvalidParameter(
            "diagram needs resolution >= 2 and positive, ordered ranges".into(),
        ));
    }
    let ld = LinearData::new(a, b, d1, d2);
    if ld.a0 <= 0.0 {
        return Err(Error::RegimeError("diagram needs a0 > 0".into()));
    }

    let intersections = match critical_sets::enumerate_codim2(&ld, l_min, l_max) {
        Ok(sets) => {
            let mut out = Vec::new();
            for p in &sets.th {
                out.push(Intersection {
                    kind: "TH",
                    modes: vec![p.hopf_mode, p.turing_mode],
                    r: p.r,
                    l: p.l,
                });
            }
            for p in &sets.tt {
                out.push(Intersection {
                    kind: "TT",
                    modes: vec![p.modes.0, p.modes.1],
                    r: p.r,
                    l: p.l,
                });
            }
            out.retain(|p| p.r >= r_min && p.r <= r_max);
            out.sort_by(|x, y| (x.l, x.r).partial_cmp(&(y.l, y.r)).unwrap());
            out
        }
        Err(Error::WindowEmpty(..)) => Vec::new(),
        Err(e) => return Err(e),
    };

    // Uniform l-grid plus an 8x refined patch within 2 cells of each
    // intersection.
    let h = (l_max - l_min) / (resolution - 1) as f64;
    let mut ls: Vec<f64> = (0..resolution).map(|k| l_min + h * k as f64).collect();
    for p in &intersections {
        let (lo, hi) = ((p.l - 2.0 * h).max(l_min), (p.l + 2.0 * h).min(l_max));
        let fine = h / 8.0;
        let mut l = lo;
        while l <= hi {
            ls.push(l);
            l += fine;
        }
    }
    ls.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ls.dedup_by(|x, y| (*x - *y).abs() < 1e-12);

    let n_hopf_max = (l_max * (ld.a0 / (ld.d1 + ld.d2)).sqrt()).ceil() as u32;
    let n_turing_max = spectrum::n2_count(&ld, l_max);
    let mut curves = Vec::new();
    for n in 0..=n_hopf_max {
        for &l in &ls {
            let r = spectrum::hopf_curve(&ld, n, l);
            if r >= r_min && r <= r_max && r > spectrum::turing_curve(&ld, n, l)? {
                curves.push(DiagramPoint {
                    family: CurveFamily::Hopf,
                    n,
                    l,
                    r,
                });
            }
        }
    }
    for n in 1..=n_turing_max {
        for &l in &ls {
            let r = spectrum::turing_curve(&ld, n, l)?;
            if r >= r_min && r <= r_max {
                curves.push(DiagramPoint {
                    family: CurveFamily::Turing,
                    n,
                    l,
                    r,
                });
            }
        }
    }

    Ok(DiagramSample {
        curves,
        intersections,
    })
}

/// CSV with header `curve,n,l,r`; `curve` is `H` or `T`.
pub fn write_diagram_csv<W: Write>(sample: &DiagramSample, w: &mut W) -> std::io::Result<()> {
    w.write_all(b"curve,n,l,r\n")?;
    for p in &sample.curves {
        writeln!(
            w,
            "{},{},{},{}",
            p.family.tag(),
            p.n,
            fmt_g17(p.l),
            fmt_g17(p.r)
        )?;
    }
    Ok(())
}

/// JSON list of `{kind, modes, r, l}` objects.
pub fn intersections_json(sample: &DiagramSample) -> String {
    use crate::report::json;
    json::arr(sample.intersections.iter().map(|p| {
        json::obj(&[
            ("kind", json::string(p.kind)),
            (
                "modes",
                json::arr(p.modes.iter().map(|&m| json::int(m as i64))),
            ),
            ("r", json::num(p.r)),
            ("l", json::num(p.l)),
        ])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEC3: (f64, f64, f64, f64) = (0.6018, 0.0077, 0.4, 19.37);
    const EX1: (f64, f64, f64, f64) = (1.472554, 0.045949, 0.417243, 4.697383);

    fn exact_sec3_point() -> (f64, f64) {
        let ld = LinearData::new(SEC3.0, SEC3.1, SEC3.2, SEC3.3);
        let sets = critical_sets::enumerate_codim2(&ld, 1.0, 2.0).unwrap();
        let p = &sets.th[0];
        (p.r, p.l)
    }

    #[test]
    fn sec3_point_is_turing_hopf() {
        let (r, l) = exact_sec3_point();
        assert!((r - 0.170468).abs() < 1e-5 && (l - 1.593334).abs() < 1e-4);
        let p = classify_point(SEC3.0, SEC3.1, SEC3.2, SEC3.3, r, l)
            .unwrap()
            .unwrap();
        assert_eq!(p.kind, BifKind::TuringHopf(0, 1));
        assert_eq!(
            p.eigenstructure,
            EigenStructure {
                imaginary_pairs: 1,
                zero_eigenvalues: 1
            }
        );
        assert_eq!(p.stability_note, StabilityNote::PossiblyStable);
    }

    #[test]
    fn example1_point_is_hopf_double_turing() {
        // Six-digit published coordinates; set membership carries the label.
        let p = classify_point(EX1.0, EX1.1, EX1.2, EX1.3, 0.501219, 3.022593)
            .unwrap()
            .unwrap();
        assert_eq!(p.kind, BifKind::HopfDoubleTuring(0, 1, 3));
        assert_eq!(
            p.eigenstructure,
            EigenStructure {
                imaginary_pairs: 1,
                zero_eigenvalues: 2
            }
        );
    }

    #[test]
    fn generic_point_is_not_a_bifurcation() {
        assert!(classify_point(SEC3.0, SEC3.1, SEC3.2, SEC3.3, 0.123, 1.7)
            .unwrap()
            .is_none());
    }

    #[test]
    fn stability_table() {
        let base = BifurcationPoint {
            r: 0.1,
            l: 1.0,
            kind: BifKind::Hopf(1),
            eigenstructure: EigenStructure {
                imaginary_pairs: 1,
                zero_eigenvalues: 0,
            },
            stability_note: StabilityNote::Unstable,
            at_r_star: false,
        };
        assert_eq!(
            bifurcating_solution_stability(&base, RegimeLabel::A2),
            StabilityNote::Unstable
        );
        let mut p = base.clone();
        p.kind = BifKind::TripleTuring(1);
        assert_eq!(
            bifurcating_solution_stability(&p, RegimeLabel::A6DoublePrime),
            StabilityNote::Unstable
        );
        p.kind = BifKind::TuringHopf(0, 1);
        assert_eq!(
            bifurcating_solution_stability(&p, RegimeLabel::A6Prime),
            StabilityNote::PossiblyStable
        );
        p.kind = BifKind::Hopf(0);
        assert_eq!(
            bifurcating_solution_stability(&p, RegimeLabel::A2),
            StabilityNote::PossiblyStable
        );
        assert_eq!(
            bifurcating_solution_stability(&p, RegimeLabel::A6DoublePrime),
            StabilityNote::Unstable
        );
    }

    #[test]
    fn diagram_contains_sec3_intersection() {
        let sample = diagram(SEC3.0, SEC3.1, SEC3.2, SEC3.3, (0.0, 0.3), (1.0, 4.0), 64).unwrap();
        assert!(sample.intersections.iter().any(|p| p.kind == "TH"
            && (p.r - 0.170468).abs() < 1e-4
            && (p.l - 1.593334).abs() < 1e-3));
        assert!(!sample.curves.is_empty());
        // Solid-curve condition, re-checked on the emitted samples.
        let ld = LinearData::new(SEC3.0, SEC3.1, SEC3.2, SEC3.3);
        for p in sample
            .curves
            .iter()
            .filter(|p| p.family == CurveFamily::Hopf)
        {
            assert!(p.r > spectrum::turing_curve(&ld, p.n, p.l).unwrap());
        }
    }

    #[test]
    fn diagram_example1_tt_and_th_coincide() {
        let sample = diagram(EX1.0, EX1.1, EX1.2, EX1.3, (0.0, 1.5), (2.9, 3.2), 32).unwrap();
        let tt: Vec<_> = sample
            .intersections
            .iter()
            .filter(|p| p.kind == "TT")
            .collect();
        let th: Vec<_> = sample
            .intersections
            .iter()
            .filter(|p| p.kind == "TH")
            .collect();
        assert!(tt.iter().any(|p| (p.l - 3.022593).abs() < 1e-4));
        assert!(th.iter().any(|p| (p.l - 3.022593).abs() < 1e-4));
    }

    #[test]
    fn diagram_empty_window() {
        let sample = diagram(SEC3.0, SEC3.1, SEC3.2, SEC3.3, (0.5, 0.6), (0.1, 0.2), 8).unwrap();
        assert!(sample.intersections.is_empty());
    }

    #[test]
    fn diagram_csv_and_json_formats() {
        let sample = diagram(SEC3.0, SEC3.1, SEC3.2, SEC3.3, (0.0, 0.3), (1.2, 2.0), 8).unwrap();
        let mut buf = Vec::new();
        write_diagram_csv(&sample, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("curve,n,l,r\n"));
        let js = intersections_json(&sample);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert!(v.is_array());
    }
}
