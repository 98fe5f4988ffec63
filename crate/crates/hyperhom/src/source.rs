//! Constructors for every state the source emits: polarization Bell states,
//! momentum Bell states, and the hyper-entangled product, with the
//! phase-control mappings and the femtosecond walk-off.
//!
//! Walk-off convention: the V⊗V branch of the raw polarization superposition
//! (the radiation cone that double-passes the crystal and the quarter-wave
//! plate) is *advanced* by the walk-off time, i.e. both of its photons carry
//! delay `−walkoff`. A quartz plate delaying V relative to H removes it —
//! but only while branch membership and polarization still coincide, that
//! is, before the half-wave plate that converts Φ-type into Ψ-type states.
//! The experiment pipelines therefore compensate first and convert after;
//! the direct Ψ constructors here return the uncompensated state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elements::{apply_waveplate, ModeSelector};
use crate::error::{Error, Result};
use crate::fock::{
    Arm, Branch, Mode, PhotonOccupation, Pol, SpatialMode, TwoPhotonState, TwoPhotonTerm,
};
use crate::SPEED_OF_LIGHT;

/// σ_t calibrated so the two-photon dip envelope `exp(−Δτ²/(4σ_t²))`, with
/// Δτ = Δx/c, has a FWHM of 60 μm in Δx (200 fs in delay; σ_t ≈ 60.1 fs).
pub fn calibrated_sigma_t() -> f64 {
    let fwhm_x = 60e-6;
    fwhm_x / (SPEED_OF_LIGHT * 4.0 * std::f64::consts::LN_2.sqrt())
}

/// Source settings. Defaults are the published operating point of the
/// apparatus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SourceParams {
    /// Down-converted wavelength, m.
    pub lambda: f64,
    /// Pump wavelength, m (λ/2).
    pub lambda_p: f64,
    /// RMS width of the single-photon temporal amplitude, s.
    pub sigma_t: f64,
    /// Temporal advance of the V⊗V branch, s.
    pub walkoff: f64,
    /// Mirror-displacement period Λ of the θ fringes, m.
    pub mirror_period: f64,
    /// Polarization interference visibility knob, in [0, 1].
    pub v_pol: f64,
    /// Momentum interference visibility knob, in [0, 1].
    pub v_mom: f64,
}

impl Default for SourceParams {
    fn default() -> SourceParams {
        SourceParams {
            lambda: 795e-9,
            lambda_p: 397.5e-9,
            sigma_t: calibrated_sigma_t(),
            walkoff: 540e-15,
            mirror_period: 70e-6,
            v_pol: 0.87,
            v_mom: 0.82,
        }
    }
}

impl SourceParams {
    /// Bench defaults but with both visibility knobs at 1.
    pub fn ideal() -> SourceParams {
        SourceParams {
            v_pol: 1.0,
            v_mom: 1.0,
            ..SourceParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_t > 0.0) {
            return Err(Error::invalid_parameter("sigma_t", "must be > 0"));
        }
        let rel = (self.lambda - 2.0 * self.lambda_p).abs() / self.lambda;
        if rel > 1e-12 {
            return Err(Error::invalid_parameter(
                "lambda",
                format!("energy conservation requires lambda = 2·lambda_p (relative error {rel:.3e})"),
            ));
        }
        for (name, v) in [("v_pol", self.v_pol), ("v_mom", self.v_mom)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid_parameter(name, "must lie in [0, 1]"));
            }
        }
        if !(self.mirror_period > 0.0) {
            return Err(Error::invalid_parameter("mirror_period", "must be > 0"));
        }
        if !(self.walkoff >= 0.0) {
            return Err(Error::invalid_parameter("walkoff", "must be ≥ 0"));
        }
        Ok(())
    }

    /// Quartz length that exactly cancels the walk-off advance.
    pub fn compensator_length(&self) -> f64 {
        self.walkoff / crate::elements::QUARTZ_DELAY_PER_METER
    }
}

/// Physical geometry of the source, recorded as metadata only; none of the
/// state math consumes it (the emitted state is independent of the hole
/// angle α).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SourceGeometry {
    /// Spherical mirror radius, m.
    pub mirror_radius: f64,
    /// Entanglement-ring diameter, m.
    pub ring_diameter: f64,
    /// Mask hole diameter, m.
    pub hole_diameter: f64,
    /// Angle between the two selected mode-pair diameters, rad.
    pub alpha: f64,
}

impl Default for SourceGeometry {
    fn default() -> SourceGeometry {
        SourceGeometry {
            mirror_radius: 0.15,
            ring_diameter: 0.016,
            hole_diameter: 1.5e-3,
            alpha: 30f64.to_radians(),
        }
    }
}

/// The four maximally entangled polarization Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Mirror displacement → polarization phase: θ = 2π Δd / Λ.
pub fn theta_from_mirror(delta_d: f64, params: &SourceParams) -> f64 {
    2.0 * std::f64::consts::PI * delta_d / params.mirror_period
}

fn check_cross_arm(pair: (SpatialMode, SpatialMode)) -> Result<()> {
    if pair.0.arm != Arm::One || pair.1.arm != Arm::Two {
        return Err(Error::InvalidWiring(format!(
            "polarization pair must be (arm-1 mode, arm-2 mode), got ({}, {})",
            pair.0, pair.1
        )));
    }
    Ok(())
}

/// Raw source state (Eq.-φ form): `(|H,H⟩ + e^{iθ}|V,V⟩)/√2` on the given
/// cross-arm spatial pair, with the V⊗V branch advanced by the walk-off.
pub fn make_phi_pol(
    theta: f64,
    pair: (SpatialMode, SpatialMode),
    params: &SourceParams,
) -> Result<TwoPhotonState> {
    check_cross_arm(pair)?;
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let terms = vec![
        TwoPhotonTerm::new(
            PhotonOccupation::new(Mode::input(pair.0, Pol::H), 0.0),
            PhotonOccupation::new(Mode::input(pair.1, Pol::H), 0.0),
            amp,
        )
        .with_branch(Branch::new(0, 0)),
        TwoPhotonTerm::new(
            PhotonOccupation::new(Mode::input(pair.0, Pol::V), -params.walkoff),
            PhotonOccupation::new(Mode::input(pair.1, Pol::V), -params.walkoff),
            amp * Complex64::from_polar(1.0, theta),
        )
        .with_branch(Branch::new(1, 0)),
    ];
    Ok(TwoPhotonState::new(terms, params.sigma_t)?
        .with_visibility(params.v_pol, params.v_mom))
}

/// Eq.-ψ form `(|H,V⟩ + e^{iθ}|V,H⟩)/√2`: the raw φ state after the
/// half-wave plate on the arm-2 photon. Walk-off rides along uncompensated.
pub fn make_psi_pol(
    theta: f64,
    pair: (SpatialMode, SpatialMode),
    params: &SourceParams,
) -> Result<TwoPhotonState> {
    let phi = make_phi_pol(theta, pair, params)?;
    apply_waveplate(
        &phi,
        &ModeSelector::arm(Arm::Two),
        std::f64::consts::PI,
        std::f64::consts::FRAC_PI_4,
    )
}

/// One of the four Bell states on a cross-arm spatial pair.
pub fn make_bell_pol(
    which: BellKind,
    pair: (SpatialMode, SpatialMode),
    params: &SourceParams,
) -> Result<TwoPhotonState> {
    match which {
        BellKind::PhiPlus => make_phi_pol(0.0, pair, params),
        BellKind::PhiMinus => make_phi_pol(std::f64::consts::PI, pair, params),
        BellKind::PsiPlus => make_psi_pol(0.0, pair, params),
        BellKind::PsiMinus => make_psi_pol(std::f64::consts::PI, pair, params),
    }
}

/// Momentum Bell state `(|a1,b2⟩ + e^{iφ}|b1,a2⟩)/√2` on the H-polarized
/// emission cone. No walk-off: both branches come from the same cone.
pub fn make_momentum(phi: f64, params: &SourceParams) -> TwoPhotonState {
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let terms = vec![
        TwoPhotonTerm::new(
            PhotonOccupation::new(Mode::input(SpatialMode::A1, Pol::H), 0.0),
            PhotonOccupation::new(Mode::input(SpatialMode::B2, Pol::H), 0.0),
            amp,
        )
        .with_branch(Branch::new(0, 0)),
        TwoPhotonTerm::new(
            PhotonOccupation::new(Mode::input(SpatialMode::B1, Pol::H), 0.0),
            PhotonOccupation::new(Mode::input(SpatialMode::A2, Pol::H), 0.0),
            amp * Complex64::from_polar(1.0, phi),
        )
        .with_branch(Branch::new(0, 1)),
    ];
    TwoPhotonState::new(terms, params.sigma_t)
        .expect("fixed construction")
        .with_visibility(params.v_pol, params.v_mom)
}

/// Raw hyper-entangled product before the half-wave plate:
/// `½ {|H,H⟩ + e^{iθ}|V,V⟩} ⊗ {|a1,b2⟩ + e^{iφ}|b1,a2⟩}`, V⊗V branch
/// advanced by the walk-off.
pub fn make_hyper_phi(theta: f64, phi: f64, params: &SourceParams) -> TwoPhotonState {
    let half = Complex64::new(0.5, 0.0);
    let mom_pairs = [
        (SpatialMode::A1, SpatialMode::B2, 0u8, 0.0),
        (SpatialMode::B1, SpatialMode::A2, 1u8, phi),
    ];
    let pol_branches = [
        (Pol::H, 0u8, 0.0, 0.0),
        (Pol::V, 1u8, theta, -params.walkoff),
    ];
    let mut terms = Vec::with_capacity(4);
    for (m1, m2, mom_tag, mom_phase) in mom_pairs {
        for (pol, pol_tag, pol_phase, delay) in pol_branches {
            terms.push(
                TwoPhotonTerm::new(
                    PhotonOccupation::new(Mode::input(m1, pol), delay),
                    PhotonOccupation::new(Mode::input(m2, pol), delay),
                    half * Complex64::from_polar(1.0, pol_phase + mom_phase),
                )
                .with_branch(Branch::new(pol_tag, mom_tag)),
            );
        }
    }
    TwoPhotonState::new(terms, params.sigma_t)
        .expect("fixed construction")
        .with_visibility(params.v_pol, params.v_mom)
}

/// The hyper-entangled state
/// `|Ξ⟩ = ½ {|H1,V2⟩ + e^{iθ}|V1,H2⟩} ⊗ {|a1,b2⟩ + e^{iφ}|b1,a2⟩}`,
/// i.e. the raw product after the arm-2 half-wave plate. Walk-off rides
/// along on the e^{iθ} polarization branch.
pub fn make_hyper(theta: f64, phi: f64, params: &SourceParams) -> TwoPhotonState {
    let raw = make_hyper_phi(theta, phi, params);
    apply_waveplate(
        &raw,
        &ModeSelector::arm(Arm::Two),
        std::f64::consts::PI,
        std::f64::consts::FRAC_PI_4,
    )
    .expect("waveplate on valid state")
}

/// Convex mixture of pure states; observables are weight-averaged.
#[derive(Clone, Debug)]
pub struct Ensemble {
    components: Vec<(f64, TwoPhotonState)>,
}

impl Ensemble {
    pub fn components(&self) -> &[(f64, TwoPhotonState)] {
        &self.components
    }

    /// Weight-average an observable over the components.
    pub fn average<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(&TwoPhotonState) -> Result<f64>,
    {
        let mut acc = 0.0;
        for (w, s) in &self.components {
            acc += w * f(s)?;
        }
        Ok(acc)
    }
}

/// Build a mixture. Weights must be non-negative and sum to 1 within 1e-9.
pub fn mixture(components: Vec<(f64, TwoPhotonState)>) -> Result<Ensemble> {
    if components.is_empty() {
        return Err(Error::invalid_parameter("components", "mixture must be non-empty"));
    }
    let mut sum = 0.0;
    for (w, _) in &components {
        if !(*w >= 0.0) {
            return Err(Error::invalid_parameter("weights", "must be ≥ 0"));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::invalid_parameter(
            "weights",
            format!("must sum to 1 within 1e-9, got {sum}"),
        ));
    }
    Ok(Ensemble { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::quartz_compensator;
    use approx::assert_relative_eq;

    #[test]
    fn theta_from_mirror_period() {
        let p = SourceParams::default();
        assert_eq!(theta_from_mirror(0.0, &p), 0.0);
        assert_relative_eq!(
            theta_from_mirror(35e-6, &p),
            std::f64::consts::PI,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            theta_from_mirror(70e-6, &p),
            2.0 * std::f64::consts::PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn sigma_t_calibration_near_60fs() {
        let s = calibrated_sigma_t();
        assert!((s - 60.1e-15).abs() < 0.2e-15, "sigma_t = {s}");
    }

    #[test]
    fn phi_plus_structure_and_walkoff() {
        let p = SourceParams::ideal();
        let s = make_bell_pol(BellKind::PhiPlus, (SpatialMode::A1, SpatialMode::B2), &p).unwrap();
        assert_eq!(s.terms().len(), 2);
        assert_relative_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        let vv = s
            .terms()
            .iter()
            .find(|t| t.photons[0].mode.pol == Pol::V)
            .unwrap();
        assert_relative_eq!(vv.photons[0].delay, -540e-15, epsilon = 1e-20);
        assert_relative_eq!(vv.photons[1].delay, -540e-15, epsilon = 1e-20);
    }

    #[test]
    fn psi_minus_projections() {
        let mut p = SourceParams::ideal();
        p.walkoff = 0.0;
        let s = make_bell_pol(BellKind::PsiMinus, (SpatialMode::A1, SpatialMode::B2), &p).unwrap();
        let hv = s
            .terms()
            .iter()
            .find(|t| t.photons[0].mode.pol == Pol::H)
            .unwrap();
        assert_relative_eq!(hv.amplitude.norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        // No |H,H⟩ component.
        assert!(s
            .terms()
            .iter()
            .all(|t| t.photons[0].mode.pol != t.photons[1].mode.pol));
    }

    #[test]
    fn bell_pol_rejects_same_arm_pair() {
        let p = SourceParams::ideal();
        assert!(matches!(
            make_bell_pol(BellKind::PhiPlus, (SpatialMode::A1, SpatialMode::B1), &p),
            Err(Error::InvalidWiring(_))
        ));
    }

    #[test]
    fn momentum_phase_endpoints() {
        let p = SourceParams::ideal();
        let plus = make_momentum(0.0, &p);
        let minus = make_momentum(std::f64::consts::PI, &p);
        assert_relative_eq!(plus.norm_sqr(), 1.0, epsilon = 1e-12);
        // ⟨a1,b2|ψ±⟩ = 1/√2 on the first branch.
        let first = &plus.terms()[0];
        assert_relative_eq!(first.amplitude.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        // ψ+ ⊥ ψ− up to branch bookkeeping: overlap = 0.
        assert_relative_eq!(plus.inner_product(&minus).unwrap().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hyper_norm_and_amplitudes() {
        let mut p = SourceParams::ideal();
        p.walkoff = 0.0;
        let s = make_hyper(0.0, 0.0, &p);
        assert_eq!(s.terms().len(), 4);
        assert_relative_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
        for t in s.terms() {
            assert_relative_eq!(t.amplitude.re, 0.5, epsilon = 1e-12);
            assert_relative_eq!(t.amplitude.im, 0.0, epsilon = 1e-12);
        }
        // Unchanged by normalize.
        let normed = s.clone().normalize().unwrap();
        assert_eq!(normed.terms().len(), 4);
        assert_relative_eq!(normed.terms()[0].amplitude.re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn hyper_sign_pattern_at_pi_pi() {
        let mut p = SourceParams::ideal();
        p.walkoff = 0.0;
        let s = make_hyper(std::f64::consts::PI, std::f64::consts::PI, &p);
        let mut signs: Vec<f64> = s.terms().iter().map(|t| t.amplitude.re).collect();
        signs.sort_by(f64::total_cmp);
        assert_relative_eq!(signs[0], -0.5, epsilon = 1e-12);
        assert_relative_eq!(signs[1], -0.5, epsilon = 1e-12);
        assert_relative_eq!(signs[2], 0.5, epsilon = 1e-12);
        assert_relative_eq!(signs[3], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn hyper_factorizes_into_bell_product() {
        // Term-by-term: make_hyper(θ,φ) amplitudes equal the product of the
        // polarization factor (on each momentum pair) and momentum factor.
        let mut p = SourceParams::ideal();
        p.walkoff = 0.0;
        for (theta, phi) in [(0.3, 1.2), (2.0, 4.4), (5.9, 0.1)] {
            let s = make_hyper(theta, phi, &p);
            assert_eq!(s.terms().len(), 4);
            for t in s.terms() {
                let pol_phase = if t.branch.pol == 1 { theta } else { 0.0 };
                let mom_phase = if t.branch.mom == 1 { phi } else { 0.0 };
                let expect = Complex64::from_polar(0.5, pol_phase + mom_phase);
                assert_relative_eq!((t.amplitude - expect).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hyper_phase_covariance_mod_2pi() {
        let p = SourceParams::ideal();
        let a = make_hyper(0.4, 1.0, &p);
        let b = make_hyper(0.4 + 2.0 * std::f64::consts::PI, 1.0, &p);
        for (ta, tb) in a.terms().iter().zip(b.terms()) {
            assert_relative_eq!((ta.amplitude - tb.amplitude).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn quartz_restores_phi_delays() {
        let p = SourceParams::ideal();
        let s = make_phi_pol(0.9, (SpatialMode::A1, SpatialMode::A2), &p).unwrap();
        let restored = quartz_compensator(&s, p.compensator_length()).unwrap();
        for t in restored.terms() {
            for ph in t.photons {
                assert!(ph.delay.abs() < 1e-18);
            }
        }
    }

    #[test]
    fn mixture_weight_validation() {
        let p = SourceParams::ideal();
        let s = make_momentum(0.0, &p);
        assert!(mixture(vec![(0.6, s.clone()), (0.3, s.clone())]).is_err());
        assert!(mixture(vec![(0.6, s.clone()), (0.4, s)]).is_ok());
    }
}
