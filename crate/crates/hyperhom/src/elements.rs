//! Optical-element transformations acting on [`TwoPhotonState`]: waveplates,
//! phase shifters, delays, blockers, and the 50/50 nonpolarizing
//! beamsplitter.
//!
//! Waveplate, phase shift, delay, and beamsplitter are norm-preserving; the
//! blocker is norm-non-increasing and deliberately does not renormalize, so
//! that downstream coincidence rates stay on the absolute scale of the
//! unblocked state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Arm, Mode, PathLabel, PhotonOccupation, Pol, SpatialMode, Stage, TwoPhotonState, TwoPhotonTerm};

/// Delay a quartz plate imposes on V-polarized light relative to H, per
/// meter of plate. Calibrated so that 18 mm cancels the 540 fs walk-off.
pub const QUARTZ_DELAY_PER_METER: f64 = 30e-15 / 1e-3;

/// One selection pattern: a mode matches when every `Some` field agrees.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModePattern {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm: Option<Arm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pol: Option<Pol>,
}

impl ModePattern {
    fn matches(&self, mode: Mode) -> bool {
        self.path.map_or(true, |p| p == mode.path)
            && self.arm.map_or(true, |a| a == mode.arm)
            && self.pol.map_or(true, |p| p == mode.pol)
    }

    fn matches_spatial(&self, mode: Mode) -> bool {
        self.path.map_or(true, |p| p == mode.path) && self.arm.map_or(true, |a| a == mode.arm)
    }
}

/// Predicate over modes: a mode is selected when any pattern matches.
/// Stage is intentionally not part of the predicate; elements act wherever
/// the photons currently sit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModeSelector {
    pub patterns: Vec<ModePattern>,
}

impl ModeSelector {
    pub fn none() -> ModeSelector {
        ModeSelector { patterns: vec![] }
    }

    pub fn all() -> ModeSelector {
        ModeSelector {
            patterns: vec![ModePattern::default()],
        }
    }

    /// Select a single spatial mode, both polarizations.
    pub fn spatial(m: SpatialMode) -> ModeSelector {
        ModeSelector {
            patterns: vec![ModePattern {
                path: Some(m.path),
                arm: Some(m.arm),
                pol: None,
            }],
        }
    }

    /// Select a set of spatial modes.
    pub fn spatial_set(modes: &[SpatialMode]) -> ModeSelector {
        ModeSelector {
            patterns: modes
                .iter()
                .map(|m| ModePattern {
                    path: Some(m.path),
                    arm: Some(m.arm),
                    pol: None,
                })
                .collect(),
        }
    }

    /// Every mode of one interferometer arm.
    pub fn arm(arm: Arm) -> ModeSelector {
        ModeSelector {
            patterns: vec![ModePattern {
                path: None,
                arm: Some(arm),
                pol: None,
            }],
        }
    }

    /// Every V-polarized mode (the quartz compensator's selector).
    pub fn vertical() -> ModeSelector {
        ModeSelector {
            patterns: vec![ModePattern {
                path: None,
                arm: None,
                pol: Some(Pol::V),
            }],
        }
    }

    pub fn matches(&self, mode: Mode) -> bool {
        self.patterns.iter().any(|p| p.matches(mode))
    }

    /// Spatial-only match, used by the waveplate which acts on both H and V
    /// of each selected spatial mode.
    pub fn matches_spatial(&self, mode: Mode) -> bool {
        self.patterns.iter().any(|p| p.matches_spatial(mode))
    }
}

/// A declarative optical-element transformation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementOp {
    /// Jones rotation with the given retardance and axis angle (radians) on
    /// each selected spatial mode.
    Waveplate {
        selector: ModeSelector,
        retardance: f64,
        axis: f64,
    },
    /// Each term gains `e^{i·phi·n}` where `n` counts its photons in
    /// selected modes.
    PhaseShift { selector: ModeSelector, phi: f64 },
    /// Adds `tau` seconds to the delay of each photon in a selected mode.
    Delay { selector: ModeSelector, tau: f64 },
    /// Polarization-dependent delay of a quartz plate of the given length
    /// (meters); V modes are delayed relative to H.
    Quartz { length: f64 },
    /// Removes every term with at least one photon in a selected mode.
    Blocker { selector: ModeSelector },
    /// The 50/50 nonpolarizing beamsplitter coupling arm pairs per path.
    Beamsplitter,
}

impl ElementOp {
    pub fn apply(&self, state: &TwoPhotonState) -> Result<TwoPhotonState> {
        match self {
            ElementOp::Waveplate {
                selector,
                retardance,
                axis,
            } => apply_waveplate(state, selector, *retardance, *axis),
            ElementOp::PhaseShift { selector, phi } => apply_phase(state, selector, *phi),
            ElementOp::Delay { selector, tau } => apply_delay(state, selector, *tau),
            ElementOp::Quartz { length } => quartz_compensator(state, *length),
            ElementOp::Blocker { selector } => apply_blocker(state, selector),
            ElementOp::Beamsplitter => apply_beamsplitter(state),
        }
    }
}

/// Standard waveplate Jones matrix in the H/V basis for retardance δ and
/// fast-axis angle ϑ:
///
/// ```text
/// [ c² + e^{iδ} s²     (1 − e^{iδ}) c s ]
/// [ (1 − e^{iδ}) c s   s² + e^{iδ} c²   ]
/// ```
///
/// A half-wave plate (δ = π) at ϑ = π/4 maps H↔V exactly.
fn jones(retardance: f64, axis: f64) -> [[Complex64; 2]; 2] {
    let e = Complex64::from_polar(1.0, retardance);
    let c = axis.cos();
    let s = axis.sin();
    let one = Complex64::new(1.0, 0.0);
    [
        [c * c * one + e * s * s, (one - e) * c * s],
        [(one - e) * c * s, s * s * one + e * c * c],
    ]
}

/// Apply a waveplate to every selected spatial mode; acts on both H and V.
pub fn apply_waveplate(
    state: &TwoPhotonState,
    selector: &ModeSelector,
    retardance: f64,
    axis: f64,
) -> Result<TwoPhotonState> {
    let j = jones(retardance, axis);
    // Per-photon expansion: H → j00 H + j10 V, V → j01 H + j11 V.
    let expand = |p: &PhotonOccupation| -> Vec<(PhotonOccupation, Complex64)> {
        if !selector.matches_spatial(p.mode) {
            return vec![(*p, Complex64::new(1.0, 0.0))];
        }
        let col = match p.mode.pol {
            Pol::H => 0,
            Pol::V => 1,
        };
        let mut out = Vec::with_capacity(2);
        for (row, pol) in [(0, Pol::H), (1, Pol::V)] {
            let amp = j[row][col];
            if amp.norm() > 0.0 {
                out.push((
                    PhotonOccupation::new(p.mode.with_pol(pol), p.delay),
                    amp,
                ));
            }
        }
        out
    };
    Ok(state.map_terms(|t| {
        let mut out = Vec::with_capacity(4);
        for (p0, a0) in expand(&t.photons[0]) {
            for (p1, a1) in expand(&t.photons[1]) {
                out.push(
                    TwoPhotonTerm::new(p0, p1, t.amplitude * a0 * a1).with_branch(t.branch),
                );
            }
        }
        out
    }))
}

/// Phase shift: each term gains `e^{i·phi·n}`, `n` = photons in selected modes.
pub fn apply_phase(
    state: &TwoPhotonState,
    selector: &ModeSelector,
    phi: f64,
) -> Result<TwoPhotonState> {
    Ok(state.map_terms(|t| {
        let n = t
            .photons
            .iter()
            .filter(|p| selector.matches(p.mode))
            .count() as f64;
        let mut t2 = *t;
        t2.amplitude *= Complex64::from_polar(1.0, phi * n);
        vec![t2]
    }))
}

/// Add `tau` to the delay of every photon in a selected mode.
pub fn apply_delay(
    state: &TwoPhotonState,
    selector: &ModeSelector,
    tau: f64,
) -> Result<TwoPhotonState> {
    Ok(state.map_terms(|t| {
        let mut t2 = *t;
        for p in t2.photons.iter_mut() {
            if selector.matches(p.mode) {
                p.delay += tau;
            }
        }
        vec![t2]
    }))
}

/// Quartz compensation plate: delays V relative to H by
/// `length · QUARTZ_DELAY_PER_METER`.
pub fn quartz_compensator(state: &TwoPhotonState, length: f64) -> Result<TwoPhotonState> {
    if !(length >= 0.0) || !length.is_finite() {
        return Err(Error::invalid_parameter(
            "length",
            format!("quartz length must be ≥ 0, got {length}"),
        ));
    }
    apply_delay(state, &ModeSelector::vertical(), length * QUARTZ_DELAY_PER_METER)
}

/// Drop every term with at least one photon in a selected mode. The squared
/// norm of the result is the survival probability; the zero state is a valid
/// output here.
pub fn apply_blocker(state: &TwoPhotonState, selector: &ModeSelector) -> Result<TwoPhotonState> {
    Ok(state.map_terms(|t| {
        if t.photons.iter().any(|p| selector.matches(p.mode)) {
            vec![]
        } else {
            vec![*t]
        }
    }))
}

/// Single-photon beamsplitter substitution with the symmetric (i on cross
/// terms) convention, coupling arm pairs within each path as the modes
/// recombine on the BS plane:
///
/// ```text
/// a1 → (a1' + i a2')/√2     a2 → (i a1' + a2')/√2
/// b1 → (b1' + i b2')/√2     b2 → (i b1' + b2')/√2
/// ```
///
/// Polarization and delay are carried through unchanged.
pub fn apply_beamsplitter(state: &TwoPhotonState) -> Result<TwoPhotonState> {
    if !state.all_at_stage(Stage::Input) {
        return Err(Error::InvalidStage(
            "beamsplitter requires all photons at the input stage".into(),
        ));
    }
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i_inv_sqrt2 = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let expand = |p: &PhotonOccupation| -> [(PhotonOccupation, Complex64); 2] {
        let out = |arm: Arm| {
            Mode::output(
                SpatialMode {
                    path: p.mode.path,
                    arm,
                },
                p.mode.pol,
            )
        };
        let (c1, c2) = match p.mode.arm {
            Arm::One => (inv_sqrt2, i_inv_sqrt2),
            Arm::Two => (i_inv_sqrt2, inv_sqrt2),
        };
        [
            (PhotonOccupation::new(out(Arm::One), p.delay), c1),
            (PhotonOccupation::new(out(Arm::Two), p.delay), c2),
        ]
    };
    Ok(state.map_terms(|t| {
        let mut out = Vec::with_capacity(4);
        for (p0, a0) in expand(&t.photons[0]) {
            for (p1, a1) in expand(&t.photons[1]) {
                out.push(
                    TwoPhotonTerm::new(p0, p1, t.amplitude * a0 * a1).with_branch(t.branch),
                );
            }
        }
        out
    }))
}

/// The one-photon 4×4 spatial beamsplitter matrix, rows/columns ordered
/// `a1, a2, b1, b2`. Exposed so tests can assert unitarity directly.
pub fn bs_spatial_matrix() -> [[Complex64; 4]; 4] {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let z = Complex64::new(0.0, 0.0);
    [
        [r, i, z, z],
        [i, r, z, z],
        [z, z, r, i],
        [z, z, i, r],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    const SIGMA: f64 = 60e-15;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn occ(spatial: SpatialMode, pol: Pol, delay: f64) -> PhotonOccupation {
        PhotonOccupation::new(Mode::input(spatial, pol), delay)
    }

    fn term(
        s1: SpatialMode,
        p1: Pol,
        s2: SpatialMode,
        p2: Pol,
        amp: Complex64,
    ) -> TwoPhotonTerm {
        TwoPhotonTerm::new(occ(s1, p1, 0.0), occ(s2, p2, 0.0), amp)
    }

    /// (|H1,H2⟩ + e^{iθ}|V1,V2⟩)/√2 on (a1, a2).
    fn phi_state(theta: f64) -> TwoPhotonState {
        let r = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        TwoPhotonState::new(
            vec![
                term(SpatialMode::A1, Pol::H, SpatialMode::A2, Pol::H, r),
                term(
                    SpatialMode::A1,
                    Pol::V,
                    SpatialMode::A2,
                    Pol::V,
                    r * Complex64::from_polar(1.0, theta),
                ),
            ],
            SIGMA,
        )
        .unwrap()
    }

    /// (|a1,b2⟩ + e^{iφ}|b1,a2⟩)/√2, H polarized.
    fn psi_mom(phi: f64) -> TwoPhotonState {
        let r = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        TwoPhotonState::new(
            vec![
                term(SpatialMode::A1, Pol::H, SpatialMode::B2, Pol::H, r),
                term(
                    SpatialMode::B1,
                    Pol::H,
                    SpatialMode::A2,
                    Pol::H,
                    r * Complex64::from_polar(1.0, phi),
                ),
            ],
            SIGMA,
        )
        .unwrap()
    }

    #[test]
    fn half_wave_at_45_swaps_h_and_v() {
        let s = phi_state(0.7);
        let flipped = apply_waveplate(
            &s,
            &ModeSelector::arm(Arm::Two),
            std::f64::consts::PI,
            std::f64::consts::FRAC_PI_4,
        )
        .unwrap();
        // Expect (|H1,V2⟩ + e^{iθ}|V1,H2⟩)/√2.
        let r = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let expect = TwoPhotonState::new(
            vec![
                term(SpatialMode::A1, Pol::H, SpatialMode::A2, Pol::V, r),
                term(
                    SpatialMode::A1,
                    Pol::V,
                    SpatialMode::A2,
                    Pol::H,
                    r * Complex64::from_polar(1.0, 0.7),
                ),
            ],
            SIGMA,
        )
        .unwrap();
        let diff = flipped.inner_product(&expect).unwrap();
        assert_relative_eq!(diff.re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(diff.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_retardance_is_identity() {
        let s = phi_state(0.3);
        let out = apply_waveplate(&s, &ModeSelector::all(), 0.0, 0.9).unwrap();
        assert_relative_eq!(
            out.inner_product(&s).unwrap().re,
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn two_half_waves_are_identity() {
        let s = phi_state(1.1);
        let sel = ModeSelector::arm(Arm::Two);
        let once = apply_waveplate(&s, &sel, std::f64::consts::PI, std::f64::consts::FRAC_PI_4)
            .unwrap();
        let twice =
            apply_waveplate(&once, &sel, std::f64::consts::PI, std::f64::consts::FRAC_PI_4)
                .unwrap();
        assert_relative_eq!(twice.inner_product(&s).unwrap().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn phase_on_one_momentum_branch_flips_sign() {
        // φ = π on selector {b1} turns ψ+ into ψ−.
        let out = apply_phase(
            &psi_mom(0.0),
            &ModeSelector::spatial(SpatialMode::B1),
            std::f64::consts::PI,
        )
        .unwrap();
        let expect = psi_mom(std::f64::consts::PI);
        assert_relative_eq!(out.inner_product(&expect).unwrap().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_phase_is_identity() {
        let s = psi_mom(0.4);
        let out = apply_phase(&s, &ModeSelector::all(), 0.0).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn delay_roundtrip_is_identity() {
        let s = psi_mom(0.0);
        let sel = ModeSelector::arm(Arm::Two);
        let out = apply_delay(&apply_delay(&s, &sel, 3e-13).unwrap(), &sel, -3e-13).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn delay_on_unselected_modes_is_identity() {
        let s = psi_mom(0.0);
        let out = apply_delay(&s, &ModeSelector::none(), 1e-13).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn quartz_cancels_walkoff() {
        // V photons advanced by 540 fs; 18 mm quartz restores them.
        let s = phi_state(0.0);
        let advanced = apply_delay(&s, &ModeSelector::vertical(), -540e-15).unwrap();
        let restored = quartz_compensator(&advanced, 18e-3).unwrap();
        for t in restored.terms() {
            for p in t.photons {
                assert!(p.delay.abs() < 1e-18);
            }
        }
    }

    #[test]
    fn quartz_partial_compensation_leaves_residual() {
        let s = phi_state(0.0);
        let advanced = apply_delay(&s, &ModeSelector::vertical(), -540e-15).unwrap();
        let half = quartz_compensator(&advanced, 9e-3).unwrap();
        let vv = half
            .terms()
            .iter()
            .find(|t| t.photons[0].mode.pol == Pol::V)
            .unwrap();
        assert_relative_eq!(vv.photons[0].delay, -270e-15, epsilon = 1e-20);
    }

    #[test]
    fn quartz_rejects_negative_length() {
        assert!(quartz_compensator(&phi_state(0.0), -1e-3).is_err());
    }

    #[test]
    fn quartz_zero_length_is_identity() {
        let s = phi_state(0.2);
        assert_eq!(quartz_compensator(&s, 0.0).unwrap(), s);
    }

    #[test]
    fn blocker_halves_momentum_state() {
        let blocked = apply_blocker(
            &psi_mom(0.0),
            &ModeSelector::spatial_set(&[SpatialMode::A1, SpatialMode::B2]),
        )
        .unwrap();
        assert_eq!(blocked.terms().len(), 1);
        assert_relative_eq!(blocked.norm_sqr(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn blocker_can_produce_zero_state() {
        let blocked = apply_blocker(
            &psi_mom(0.0),
            &ModeSelector::spatial_set(&[SpatialMode::A1, SpatialMode::A2]),
        )
        .unwrap();
        assert!(blocked.is_empty());
        assert!(matches!(blocked.normalize(), Err(crate::Error::ZeroState)));
    }

    #[test]
    fn blocker_empty_selector_is_identity() {
        let s = psi_mom(0.0);
        assert_eq!(apply_blocker(&s, &ModeSelector::none()).unwrap(), s);
    }

    #[test]
    fn beamsplitter_single_photon_split() {
        // Photon pair a1H ⊗ b2V keeps a clean per-photon split; check the
        // a1 photon spreads over a1', a2' with relative phase i.
        let s = TwoPhotonState::new(
            vec![term(SpatialMode::A1, Pol::H, SpatialMode::B2, Pol::V, c(1.0, 0.0))],
            SIGMA,
        )
        .unwrap();
        let out = apply_beamsplitter(&s).unwrap();
        assert_eq!(out.terms().len(), 4);
        assert_relative_eq!(out.norm_sqr(), 1.0, epsilon = 1e-12);
        assert!(out.all_at_stage(Stage::Output));
    }

    #[test]
    fn beamsplitter_bunches_indistinguishable_photons() {
        let s = TwoPhotonState::new(
            vec![term(SpatialMode::A1, Pol::H, SpatialMode::A2, Pol::H, c(1.0, 0.0))],
            SIGMA,
        )
        .unwrap();
        let out = apply_beamsplitter(&s).unwrap();
        // Coincidence terms cancel; only the bunched a1'a1' and a2'a2' remain.
        assert_eq!(out.terms().len(), 2);
        for t in out.terms() {
            assert_eq!(t.photons[0].mode, t.photons[1].mode);
        }
        assert_relative_eq!(out.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn beamsplitter_rejects_output_stage_photons() {
        let s = TwoPhotonState::new(
            vec![term(SpatialMode::A1, Pol::H, SpatialMode::B2, Pol::V, c(1.0, 0.0))],
            SIGMA,
        )
        .unwrap();
        let once = apply_beamsplitter(&s).unwrap();
        assert!(matches!(
            apply_beamsplitter(&once),
            Err(crate::Error::InvalidStage(_))
        ));
    }

    #[test]
    fn bs_spatial_matrix_is_unitary() {
        let u = bs_spatial_matrix();
        for r in 0..4 {
            for s in 0..4 {
                let mut acc = c(0.0, 0.0);
                for k in 0..4 {
                    acc += u[r][k] * u[s][k].conj();
                }
                let expect = if r == s { 1.0 } else { 0.0 };
                assert_relative_eq!(acc.re, expect, epsilon = 1e-12);
                assert_relative_eq!(acc.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn phase_and_delay_commute_on_disjoint_selectors() {
        let s = psi_mom(0.3);
        let sel_phase = ModeSelector::spatial(SpatialMode::B1);
        let sel_delay = ModeSelector::spatial(SpatialMode::A2);
        let ab = apply_delay(&apply_phase(&s, &sel_phase, 0.9).unwrap(), &sel_delay, 2e-13)
            .unwrap();
        let ba = apply_phase(&apply_delay(&s, &sel_delay, 2e-13).unwrap(), &sel_phase, 0.9)
            .unwrap();
        assert_eq!(ab, ba);
    }
}
