//! Coincidence probabilities after the beamsplitter, polarization-analyzer
//! correlations, Monte Carlo counts, and curve statistics.
//!
//! Detectors are non-number-resolving avalanche diodes: bunched outcomes
//! (two photons in one output mode) count as non-coincidence. The source
//! visibility knobs `v_pol`, `v_mom` act here, as multipliers on
//! interference cross-contributions between terms from different source
//! branches; they never rescale state amplitudes, so pure states and
//! dephased admixtures share one code path.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{term_overlap, Branch, Pol, SpatialMode, Stage, TwoPhotonState, TwoPhotonTerm};

/// Which output spatial modes feed which detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorWiring {
    pub side1: Vec<SpatialMode>,
    pub side2: Vec<SpatialMode>,
    pub polarization_insensitive: bool,
    /// Linear-polarization analyzer angles (radians) in front of side 1 and
    /// side 2, honored when `polarization_insensitive` is false.
    pub analyzers: Option<(f64, f64)>,
}

impl Default for DetectorWiring {
    fn default() -> DetectorWiring {
        DetectorWiring {
            side1: vec![SpatialMode::A1, SpatialMode::B1],
            side2: vec![SpatialMode::A2, SpatialMode::B2],
            polarization_insensitive: true,
            analyzers: None,
        }
    }
}

impl DetectorWiring {
    pub fn validate(&self) -> Result<()> {
        for m in &self.side1 {
            if self.side2.contains(m) {
                return Err(Error::InvalidWiring(format!(
                    "mode {m} wired to both detector sides"
                )));
            }
        }
        if self.side1.is_empty() || self.side2.is_empty() {
            return Err(Error::InvalidWiring("empty detector side".into()));
        }
        Ok(())
    }

    fn side_of(&self, m: SpatialMode) -> Option<u8> {
        if self.side1.contains(&m) {
            Some(1)
        } else if self.side2.contains(&m) {
            Some(2)
        } else {
            None
        }
    }
}

/// An ordered series of (scan value, coincidence probability, optional
/// Monte Carlo counts).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub probability: f64,
    pub counts: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub points: Vec<CurvePoint>,
}

impl Curve {
    pub fn from_probabilities(points: Vec<(f64, f64)>) -> Curve {
        Curve {
            points: points
                .into_iter()
                .map(|(x, probability)| CurvePoint {
                    x,
                    probability,
                    counts: None,
                })
                .collect(),
        }
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.probability)
    }
}

/// Cross-contribution weight between two source branches.
fn branch_weight(a: Branch, b: Branch, v_pol: f64, v_mom: f64) -> f64 {
    let mut w = 1.0;
    if a.pol != b.pol {
        w *= v_pol;
    }
    if a.mom != b.mom {
        w *= v_mom;
    }
    w
}

/// Squared norm of a projected term list with branch-weighted cross terms.
fn weighted_norm_sqr(
    terms: &[TwoPhotonTerm],
    sigma_t: f64,
    v_pol: f64,
    v_mom: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for (i, ti) in terms.iter().enumerate() {
        for tj in &terms[i..] {
            let ov = term_overlap(ti, tj, sigma_t)?;
            if ov == 0.0 {
                continue;
            }
            let z = ti.amplitude.conj() * tj.amplitude * ov;
            if std::ptr::eq(ti, tj) {
                acc += z.re;
            } else {
                acc += 2.0 * z.re * branch_weight(ti.branch, tj.branch, v_pol, v_mom);
            }
        }
    }
    Ok(acc)
}

/// Outcome classes for the post-BS two-photon distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Coincidence,
    BothSide1,
    BothSide2,
}

fn projection_probability(
    state: &TwoPhotonState,
    wiring: &DetectorWiring,
    outcome: Outcome,
) -> Result<f64> {
    wiring.validate()?;
    if !state.all_at_stage(Stage::Output) {
        return Err(Error::InvalidStage(
            "coincidence detection requires all photons behind the beamsplitter".into(),
        ));
    }
    let selected: Vec<TwoPhotonTerm> = state
        .terms()
        .iter()
        .filter(|t| {
            let s0 = wiring.side_of(t.photons[0].mode.spatial());
            let s1 = wiring.side_of(t.photons[1].mode.spatial());
            match (s0, s1, outcome) {
                (Some(a), Some(b), Outcome::Coincidence) => a != b,
                (Some(1), Some(1), Outcome::BothSide1) => true,
                (Some(2), Some(2), Outcome::BothSide2) => true,
                _ => false,
            }
        })
        .copied()
        .collect();

    match (outcome, wiring.polarization_insensitive, wiring.analyzers) {
        (Outcome::Coincidence, false, Some((a1, a2))) => {
            analyzer_projection(&selected, wiring, (a1, a2), state)
        }
        _ => weighted_norm_sqr(&selected, state.sigma_t(), state.v_pol(), state.v_mom()),
    }
}

/// Scalar amplitude of a photon behind a linear analyzer at `angle`.
fn analyzer_amp(pol: Pol, angle: f64) -> f64 {
    match pol {
        Pol::H => angle.cos(),
        Pol::V => angle.sin(),
    }
}

/// Coincidence projection through a pair of analyzers: each term collapses
/// to a scalar amplitude with the (side-1, side-2) photon delays remembered;
/// cross terms keep the spatial-mode equality constraint and the temporal
/// Gram factors.
fn analyzer_projection(
    terms: &[TwoPhotonTerm],
    wiring: &DetectorWiring,
    angles: (f64, f64),
    state: &TwoPhotonState,
) -> Result<f64> {
    // (amplitude, side-ordered spatial modes, side-ordered delays, branch)
    let mut projected: Vec<(Complex64, [SpatialMode; 2], [f64; 2], Branch)> = Vec::new();
    for t in terms {
        let (p1, p2) = match wiring.side_of(t.photons[0].mode.spatial()) {
            Some(1) => (&t.photons[0], &t.photons[1]),
            _ => (&t.photons[1], &t.photons[0]),
        };
        let f = analyzer_amp(p1.mode.pol, angles.0) * analyzer_amp(p2.mode.pol, angles.1);
        if f != 0.0 {
            projected.push((
                t.amplitude * f,
                [p1.mode.spatial(), p2.mode.spatial()],
                [p1.delay, p2.delay],
                t.branch,
            ));
        }
    }
    let sigma = state.sigma_t();
    let mut acc = 0.0;
    for (i, a) in projected.iter().enumerate() {
        for (j, b) in projected.iter().enumerate().skip(i) {
            if a.1 != b.1 {
                continue;
            }
            let ov = crate::fock::temporal_overlap(a.2[0], b.2[0], sigma)?
                * crate::fock::temporal_overlap(a.2[1], b.2[1], sigma)?;
            let z = a.0.conj() * b.0 * ov;
            if i == j {
                acc += z.re;
            } else {
                acc += 2.0 * z.re * branch_weight(a.3, b.3, state.v_pol(), state.v_mom());
            }
        }
    }
    Ok(acc)
}

/// Probability that exactly one photon lands on each detector side,
/// summed over polarizations (or projected through the analyzers when set).
///
/// For the ideal hyper-entangled state at Δx = 0 this evaluates to
/// `½ (1 − cos θ cos φ)`.
pub fn coincidence_probability(state: &TwoPhotonState, wiring: &DetectorWiring) -> Result<f64> {
    projection_probability(state, wiring, Outcome::Coincidence)
}

/// Probability that both photons land on detector side 1 (bunched or
/// cross-mode within the side).
pub fn both_side1_probability(state: &TwoPhotonState, wiring: &DetectorWiring) -> Result<f64> {
    projection_probability(state, wiring, Outcome::BothSide1)
}

/// Probability that both photons land on detector side 2.
pub fn both_side2_probability(state: &TwoPhotonState, wiring: &DetectorWiring) -> Result<f64> {
    projection_probability(state, wiring, Outcome::BothSide2)
}

/// Joint transmission probability through two linear analyzers, without the
/// beamsplitter. The state must occupy exactly two spatial modes; the
/// analyzer angles apply in canonical spatial-mode order.
pub fn polarization_correlation(
    state: &TwoPhotonState,
    angle1: f64,
    angle2: f64,
) -> Result<f64> {
    if !state.all_at_stage(Stage::Input) {
        return Err(Error::InvalidStage(
            "polarization correlation is measured without the beamsplitter".into(),
        ));
    }
    let mut spatials: Vec<SpatialMode> = state
        .terms()
        .iter()
        .flat_map(|t| t.photons.iter().map(|p| p.mode.spatial()))
        .collect();
    spatials.sort();
    spatials.dedup();
    if spatials.len() != 2 {
        return Err(Error::InvalidWiring(format!(
            "analyzer correlation needs a state on exactly 2 spatial modes, found {}",
            spatials.len()
        )));
    }
    let (m1, m2) = (spatials[0], spatials[1]);
    let sigma = state.sigma_t();
    // Collapse each term behind the analyzers, keeping delays per mode slot.
    let mut projected: Vec<(Complex64, [f64; 2], Branch)> = Vec::new();
    for t in state.terms() {
        let (p1, p2) = if t.photons[0].mode.spatial() == m1 {
            (&t.photons[0], &t.photons[1])
        } else {
            (&t.photons[1], &t.photons[0])
        };
        if p2.mode.spatial() != m2 {
            return Err(Error::InvalidWiring(
                "each term must place one photon per spatial mode".into(),
            ));
        }
        let f = analyzer_amp(p1.mode.pol, angle1) * analyzer_amp(p2.mode.pol, angle2);
        if f != 0.0 {
            projected.push((t.amplitude * f, [p1.delay, p2.delay], t.branch));
        }
    }
    let mut acc = 0.0;
    for (i, a) in projected.iter().enumerate() {
        for (j, b) in projected.iter().enumerate().skip(i) {
            let ov = crate::fock::temporal_overlap(a.1[0], b.1[0], sigma)?
                * crate::fock::temporal_overlap(a.1[1], b.1[1], sigma)?;
            let z = a.0.conj() * b.0 * ov;
            if i == j {
                acc += z.re;
            } else {
                acc += 2.0 * z.re * branch_weight(a.2, b.2, state.v_pol(), state.v_mom());
            }
        }
    }
    Ok(acc)
}

/// Poisson-distributed count with mean `p · mean_pairs`, deterministic for a
/// fixed seed.
pub fn monte_carlo_counts(p: f64, mean_pairs: f64, seed: u64) -> Result<u64> {
    if !(0.0..=1.0 + 1e-12).contains(&p) || !p.is_finite() {
        return Err(Error::invalid_parameter(
            "p",
            format!("probability must lie in [0, 1], got {p}"),
        ));
    }
    if !(mean_pairs >= 0.0) || !mean_pairs.is_finite() {
        return Err(Error::invalid_parameter("mean_pairs", "must be ≥ 0"));
    }
    let mean = p.clamp(0.0, 1.0) * mean_pairs;
    if mean == 0.0 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poisson = Poisson::new(mean)
        .map_err(|e| Error::invalid_parameter("mean_pairs", e.to_string()))?;
    Ok(poisson.sample(&mut rng) as u64)
}

/// Fringe visibility `(max − min) / (max + min)` over the probability
/// values of a curve.
pub fn visibility(curve: &Curve) -> Result<f64> {
    if curve.points.is_empty() {
        return Err(Error::invalid_parameter("curve", "must be non-empty"));
    }
    let max = curve.probabilities().fold(f64::NEG_INFINITY, f64::max);
    let min = curve.probabilities().fold(f64::INFINITY, f64::min);
    if max + min <= 0.0 {
        return Err(Error::invalid_parameter(
            "curve",
            "max + min must be positive",
        ));
    }
    Ok((max - min) / (max + min))
}

/// Baseline estimated from the curve wings: mean of the outer 10% of samples
/// on each side (at least one per side).
fn wing_baseline(curve: &Curve) -> f64 {
    let n = curve.points.len();
    let k = (n / 10).max(1);
    let wings = curve.points[..k]
        .iter()
        .chain(&curve.points[n - k..]);
    let (mut sum, mut cnt) = (0.0, 0usize);
    for p in wings {
        sum += p.probability;
        cnt += 1;
    }
    sum / cnt as f64
}

/// Dip/peak depth relative to the wing baseline:
/// `|baseline − extremum| / baseline`. This is the figure of merit quoted
/// for HOM dip and peak curves, where the wings sit at the ½ accidental
/// level; for a full fringe it coincides with [`visibility`].
pub fn dip_visibility(curve: &Curve) -> Result<f64> {
    if curve.points.len() < 3 {
        return Err(Error::invalid_parameter("curve", "too few samples"));
    }
    let baseline = wing_baseline(curve);
    if baseline <= 0.0 {
        return Err(Error::invalid_parameter("curve", "non-positive baseline"));
    }
    let extremum = curve
        .probabilities()
        .fold(curve.points[0].probability, |acc, p| {
            if (p - baseline).abs() > (acc - baseline).abs() {
                p
            } else {
                acc
            }
        });
    Ok((baseline - extremum).abs() / baseline)
}

/// Full width at half of (baseline − extremum), with the baseline estimated
/// from the curve wings and linear interpolation between samples.
pub fn dip_fwhm(curve: &Curve) -> Result<f64> {
    if curve.points.len() < 5 {
        return Err(Error::Shape("too few samples for a width estimate".into()));
    }
    let baseline = wing_baseline(curve);
    let (idx, extremum) = curve
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.probability))
        .fold((0, curve.points[0].probability), |(bi, bp), (i, p)| {
            if (p - baseline).abs() > (bp - baseline).abs() {
                (i, p)
            } else {
                (bi, bp)
            }
        });
    let depth = baseline - extremum;
    if depth.abs() < 1e-15 {
        return Err(Error::Shape("curve has no extremum against baseline".into()));
    }
    let half = baseline - depth / 2.0;
    // Walk outwards from the extremum to the half-crossings.
    let cross = |range: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = idx;
        for i in range {
            let (pa, pb) = (curve.points[prev], curve.points[i]);
            let (ya, yb) = (pa.probability, pb.probability);
            if (ya - half) * (yb - half) <= 0.0 && ya != yb {
                let t = (half - ya) / (yb - ya);
                return Some(pa.x + t * (pb.x - pa.x));
            }
            prev = i;
        }
        None
    };
    let left = cross(&mut (0..idx).rev()).ok_or_else(|| {
        Error::Shape("no half-depth crossing on the left side".into())
    })?;
    let right = cross(&mut (idx + 1..curve.points.len())).ok_or_else(|| {
        Error::Shape("no half-depth crossing on the right side".into())
    })?;
    Ok((right - left).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::apply_beamsplitter;
    use crate::fock::{Mode, PhotonOccupation, TwoPhotonTerm};
    use crate::source::{make_bell_pol, make_hyper, BellKind, SourceParams};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn ideal_no_walkoff() -> SourceParams {
        let mut p = SourceParams::ideal();
        p.walkoff = 0.0;
        p
    }

    #[test]
    fn hyper_coincidence_law_endpoints() {
        let p = ideal_no_walkoff();
        let w = DetectorWiring::default();
        let cases = [
            (0.0, 0.0, 0.0),
            (std::f64::consts::PI, 0.0, 1.0),
            (std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, 0.5),
        ];
        for (theta, phi, expect) in cases {
            let s = apply_beamsplitter(&make_hyper(theta, phi, &p)).unwrap();
            assert_relative_eq!(
                coincidence_probability(&s, &w).unwrap(),
                expect,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn distinguishable_photons_classical_baseline() {
        let p = ideal_no_walkoff();
        let tau = 1000.0 * p.sigma_t;
        let t = TwoPhotonTerm::new(
            PhotonOccupation::new(Mode::input(SpatialMode::A1, Pol::H), 0.0),
            PhotonOccupation::new(Mode::input(SpatialMode::A2, Pol::H), tau),
            Complex64::new(1.0, 0.0),
        );
        let s = apply_beamsplitter(
            &crate::fock::TwoPhotonState::new(vec![t], p.sigma_t).unwrap(),
        )
        .unwrap();
        assert_relative_eq!(
            coincidence_probability(&s, &DetectorWiring::default()).unwrap(),
            0.5,
            epsilon = 1e-9
        );
    }

    #[test]
    fn probability_conservation_over_outcomes() {
        let p = ideal_no_walkoff();
        let w = DetectorWiring::default();
        let s = apply_beamsplitter(&make_hyper(0.8, 2.1, &p)).unwrap();
        let total = coincidence_probability(&s, &w).unwrap()
            + both_side1_probability(&s, &w).unwrap()
            + both_side2_probability(&s, &w).unwrap();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coincidence_rejects_input_stage() {
        let p = ideal_no_walkoff();
        let s = make_hyper(0.0, 0.0, &p);
        assert!(matches!(
            coincidence_probability(&s, &DetectorWiring::default()),
            Err(Error::InvalidStage(_))
        ));
    }

    #[test]
    fn phi_minus_analyzer_correlations() {
        let mut p = ideal_no_walkoff();
        let pair = (SpatialMode::A1, SpatialMode::B2);
        let s = make_bell_pol(BellKind::PhiMinus, pair, &p).unwrap();
        assert_relative_eq!(polarization_correlation(&s, 0.0, 0.0).unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(
            polarization_correlation(&s, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4)
                .unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // Reduced polarization visibility: ¼(1 − v_pol) at 45°/45°.
        p.v_pol = 0.80;
        let s = make_bell_pol(BellKind::PhiMinus, pair, &p).unwrap();
        assert_relative_eq!(
            polarization_correlation(&s, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4)
                .unwrap(),
            0.05,
            epsilon = 1e-12
        );
    }

    #[test]
    fn analyzer_outcome_sum_rule() {
        let p = ideal_no_walkoff();
        let s = make_bell_pol(BellKind::PsiMinus, (SpatialMode::A1, SpatialMode::B2), &p).unwrap();
        let (a1, a2) = (0.3, 1.1);
        let orth = std::f64::consts::FRAC_PI_2;
        let sum = polarization_correlation(&s, a1, a2).unwrap()
            + polarization_correlation(&s, a1 + orth, a2).unwrap()
            + polarization_correlation(&s, a1, a2 + orth).unwrap()
            + polarization_correlation(&s, a1 + orth, a2 + orth).unwrap();
        assert_relative_eq!(sum, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn monte_carlo_zero_probability() {
        for seed in 0..32 {
            assert_eq!(monte_carlo_counts(0.0, 1e4, seed).unwrap(), 0);
        }
    }

    #[test]
    fn monte_carlo_poisson_mean_and_variance() {
        let n = 1000;
        let mean_pairs = 1e4;
        let mut samples = Vec::with_capacity(n);
        for seed in 0..n as u64 {
            samples.push(monte_carlo_counts(0.5, mean_pairs, seed).unwrap() as f64);
        }
        let mean: f64 = samples.iter().sum::<f64>() / n as f64;
        let expect = 0.5 * mean_pairs;
        // 3σ band on the sample mean of n Poisson draws.
        let band = 3.0 * (expect / n as f64).sqrt();
        assert!((mean - expect).abs() < band, "mean {mean} vs {expect} ± {band}");
        let var: f64 =
            samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1) as f64;
        // Var/mean → 1 for a Poisson; sampling error of the ratio is
        // ~√(2/n) at 1σ.
        let ratio = var / expect;
        assert!((ratio - 1.0).abs() < 3.0 * (2.0 / n as f64).sqrt(), "ratio {ratio}");
    }

    #[test]
    fn monte_carlo_deterministic_per_seed() {
        let a = monte_carlo_counts(0.3, 1e4, 42).unwrap();
        let b = monte_carlo_counts(0.3, 1e4, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn monte_carlo_rejects_bad_probability() {
        assert!(monte_carlo_counts(-0.1, 1e4, 0).is_err());
        assert!(monte_carlo_counts(1.5, 1e4, 0).is_err());
    }

    #[test]
    fn visibility_of_constant_and_ideal_fringe() {
        let flat = Curve::from_probabilities((0..20).map(|i| (i as f64, 0.3)).collect());
        assert_relative_eq!(visibility(&flat).unwrap(), 0.0, epsilon = 1e-12);
        let fringe = Curve::from_probabilities(
            (0..=48)
                .map(|i| {
                    let th = i as f64 * std::f64::consts::PI / 24.0;
                    (th, 0.5 * (1.0 - th.cos()))
                })
                .collect(),
        );
        assert_relative_eq!(visibility(&fringe).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn visibility_of_damped_fringe() {
        let fringe = Curve::from_probabilities(
            (0..=48)
                .map(|i| {
                    let th = i as f64 * std::f64::consts::PI / 24.0;
                    (th, 0.5 * (1.0 - 0.87 * th.cos()))
                })
                .collect(),
        );
        assert_relative_eq!(visibility(&fringe).unwrap(), 0.87, epsilon = 1e-12);
    }

    #[test]
    fn visibility_rejects_empty_curve() {
        assert!(visibility(&Curve::default()).is_err());
    }

    fn gaussian_dip(w: f64, step: f64) -> Curve {
        let mut pts = Vec::new();
        let mut x = -150.0;
        while x <= 150.0 + 1e-9 {
            pts.push((x, 0.5 * (1.0 - (-(x / w) * (x / w)).exp())));
            x += step;
        }
        Curve::from_probabilities(pts)
    }

    #[test]
    fn fwhm_of_gaussian_dip_closed_form() {
        let w = 36.067;
        let expect = 2.0 * w * std::f64::consts::LN_2.sqrt();
        let got = dip_fwhm(&gaussian_dip(w, 2.0)).unwrap();
        assert!((got - expect).abs() < 0.05, "got {got}, expect {expect}");
    }

    #[test]
    fn fwhm_refinement_convergence() {
        let w = 36.067;
        let coarse = dip_fwhm(&gaussian_dip(w, 2.0)).unwrap();
        let fine = dip_fwhm(&gaussian_dip(w, 0.5)).unwrap();
        assert!((coarse - fine).abs() < 1.0);
    }

    #[test]
    fn fwhm_rejects_flat_curve() {
        let flat = Curve::from_probabilities((0..40).map(|i| (i as f64, 0.5)).collect());
        assert!(matches!(dip_fwhm(&flat), Err(Error::Shape(_))));
    }

    #[test]
    fn dip_visibility_of_peak_and_dip() {
        let dip = gaussian_dip(36.067, 2.0);
        assert_relative_eq!(dip_visibility(&dip).unwrap(), 1.0, epsilon = 1e-4);
        let peak = Curve {
            points: dip
                .points
                .iter()
                .map(|p| CurvePoint {
                    x: p.x,
                    probability: 1.0 - p.probability,
                    counts: None,
                })
                .collect(),
        };
        assert_relative_eq!(dip_visibility(&peak).unwrap(), 1.0, epsilon = 1e-4);
    }

    #[test]
    fn wiring_rejects_overlapping_sides() {
        let w = DetectorWiring {
            side1: vec![SpatialMode::A1],
            side2: vec![SpatialMode::A1],
            polarization_insensitive: true,
            analyzers: None,
        };
        assert!(w.validate().is_err());
    }
}
