//! Mode labels and the two-photon Fock representation.
//!
//! Eight input modes and eight output modes exist: path (`a`/`b`) × arm
//! (`1`/`2`) × polarization (`H`/`V`) × stage (input / behind the
//! beamsplitter). A state is a superposition of creation-operator pairs
//! applied to the vacuum; each photon additionally carries a scalar optical
//! delay. Single-photon temporal amplitudes are identical real Gaussians
//! shifted by that delay, so the amplitude overlap of two wavepackets is
//! `exp(−Δτ² / (8σ_t²))`. Carrier-phase factors are omitted: in every
//! experiment modeled here both interfering two-photon amplitudes pick up the
//! same total carrier phase, and the interference phases θ, φ are injected
//! explicitly instead.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::AMPLITUDE_EPS;

/// Which half of the entanglement ring the mode came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathLabel {
    A,
    B,
}

/// Interferometer arm. Arm-1 modes (`a1`, `b1`) travel one side of the
/// interferometer, arm-2 modes the other; the beamsplitter couples arms
/// within a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Arm {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    pub fn flipped(self) -> Pol {
        match self {
            Pol::H => Pol::V,
            Pol::V => Pol::H,
        }
    }
}

/// Before or after the beamsplitter. Output modes are the primed modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Input,
    Output,
}

/// Spatial part of a mode label: path and arm, stage-agnostic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpatialMode {
    pub path: PathLabel,
    pub arm: Arm,
}

impl SpatialMode {
    pub const A1: SpatialMode = SpatialMode { path: PathLabel::A, arm: Arm::One };
    pub const A2: SpatialMode = SpatialMode { path: PathLabel::A, arm: Arm::Two };
    pub const B1: SpatialMode = SpatialMode { path: PathLabel::B, arm: Arm::One };
    pub const B2: SpatialMode = SpatialMode { path: PathLabel::B, arm: Arm::Two };
}

impl fmt::Display for SpatialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.path {
            PathLabel::A => 'a',
            PathLabel::B => 'b',
        };
        let n = match self.arm {
            Arm::One => '1',
            Arm::Two => '2',
        };
        write!(f, "{p}{n}")
    }
}

/// A labeled electromagnetic mode, the index set of the Fock algebra.
/// Totally ordered by (path, arm, pol, stage) for canonicalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub path: PathLabel,
    pub arm: Arm,
    pub pol: Pol,
    pub stage: Stage,
}

impl Mode {
    pub fn input(spatial: SpatialMode, pol: Pol) -> Mode {
        Mode {
            path: spatial.path,
            arm: spatial.arm,
            pol,
            stage: Stage::Input,
        }
    }

    pub fn output(spatial: SpatialMode, pol: Pol) -> Mode {
        Mode {
            path: spatial.path,
            arm: spatial.arm,
            pol,
            stage: Stage::Output,
        }
    }

    pub fn spatial(&self) -> SpatialMode {
        SpatialMode {
            path: self.path,
            arm: self.arm,
        }
    }

    pub fn with_pol(self, pol: Pol) -> Mode {
        Mode { pol, ..self }
    }

    /// All eight modes of one stage, in canonical order.
    pub fn all(stage: Stage) -> [Mode; 8] {
        let mut out = [Mode {
            path: PathLabel::A,
            arm: Arm::One,
            pol: Pol::H,
            stage,
        }; 8];
        let mut i = 0;
        for path in [PathLabel::A, PathLabel::B] {
            for arm in [Arm::One, Arm::Two] {
                for pol in [Pol::H, Pol::V] {
                    out[i] = Mode { path, arm, pol, stage };
                    i += 1;
                }
            }
        }
        out
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.stage == Stage::Output { "'" } else { "" };
        write!(f, "{}{}{:?}", self.spatial(), prime, self.pol)
    }
}

/// One photon: the mode it occupies and its accumulated optical delay in
/// seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonOccupation {
    pub mode: Mode,
    pub delay: f64,
}

impl PhotonOccupation {
    pub fn new(mode: Mode, delay: f64) -> PhotonOccupation {
        PhotonOccupation { mode, delay }
    }

    fn cmp_key(&self, other: &PhotonOccupation) -> Ordering {
        self.mode
            .cmp(&other.mode)
            .then(self.delay.total_cmp(&other.delay))
    }
}

/// Which superposition branch of each degree of freedom a term descends
/// from. Detection weights cross-contributions between different branches by
/// the source visibility knobs; terms from the same branch always interfere
/// at full strength. Default tag `(0, 0)` makes tagging invisible for plain
/// states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Branch {
    pub pol: u8,
    pub mom: u8,
}

impl Branch {
    pub fn new(pol: u8, mom: u8) -> Branch {
        Branch { pol, mom }
    }
}

/// One creation-operator pair `c · a†_x a†_y |0⟩`. Stored in canonical order
/// (`photon_a ≤ photon_b`); swapping the two occupations leaves the term
/// identical (bosonic symmetry).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPhotonTerm {
    pub photons: [PhotonOccupation; 2],
    pub amplitude: Complex64,
    pub branch: Branch,
}

impl TwoPhotonTerm {
    pub fn new(a: PhotonOccupation, b: PhotonOccupation, amplitude: Complex64) -> TwoPhotonTerm {
        TwoPhotonTerm {
            photons: [a, b],
            amplitude,
            branch: Branch::default(),
        }
        .canonical()
    }

    pub fn with_branch(mut self, branch: Branch) -> TwoPhotonTerm {
        self.branch = branch;
        self
    }

    fn canonical(mut self) -> TwoPhotonTerm {
        if self.photons[0].cmp_key(&self.photons[1]) == Ordering::Greater {
            self.photons.swap(0, 1);
        }
        self
    }

    fn cmp_key(&self, other: &TwoPhotonTerm) -> Ordering {
        self.photons[0]
            .cmp_key(&other.photons[0])
            .then(self.photons[1].cmp_key(&other.photons[1]))
            .then(self.branch.cmp(&other.branch))
    }

    fn same_occupation(&self, other: &TwoPhotonTerm) -> bool {
        self.photons[0].cmp_key(&other.photons[0]) == Ordering::Equal
            && self.photons[1].cmp_key(&other.photons[1]) == Ordering::Equal
    }
}

/// Gaussian amplitude overlap of two single-photon wavepackets with delays
/// `d1`, `d2` and shared RMS temporal width `sigma_t`:
/// `exp(−(d1−d2)² / (8 σ_t²))`. Symmetric; equals 1 iff `d1 == d2`.
pub fn temporal_overlap(d1: f64, d2: f64, sigma_t: f64) -> Result<f64> {
    if !(sigma_t > 0.0) || !sigma_t.is_finite() {
        return Err(Error::invalid_parameter(
            "sigma_t",
            format!("must be positive and finite, got {sigma_t}"),
        ));
    }
    let dt = d1 - d2;
    Ok((-(dt * dt) / (8.0 * sigma_t * sigma_t)).exp())
}

/// Pairing contribution `⟨t1|t2⟩` between two unit-amplitude terms: the
/// bosonic permanent of the 2×2 matrix of single-photon overlaps
/// (mode-equality indicator × temporal overlap). Real by construction.
pub fn term_overlap(t1: &TwoPhotonTerm, t2: &TwoPhotonTerm, sigma_t: f64) -> Result<f64> {
    let m = |x: &PhotonOccupation, y: &PhotonOccupation| -> Result<f64> {
        if x.mode == y.mode {
            temporal_overlap(x.delay, y.delay, sigma_t)
        } else {
            Ok(0.0)
        }
    };
    let m00 = m(&t1.photons[0], &t2.photons[0])?;
    let m11 = m(&t1.photons[1], &t2.photons[1])?;
    let m01 = m(&t1.photons[0], &t2.photons[1])?;
    let m10 = m(&t1.photons[1], &t2.photons[0])?;
    Ok(m00 * m11 + m01 * m10)
}

/// Superposition of creation-operator pairs with complex amplitudes and
/// per-photon delays — the central state representation.
///
/// Canonicalization keeps terms sorted and merges duplicates (same mode/delay
/// pairs and same branch tag) by amplitude addition; amplitudes below
/// [`AMPLITUDE_EPS`](crate::AMPLITUDE_EPS) are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPhotonState {
    terms: Vec<TwoPhotonTerm>,
    sigma_t: f64,
    v_pol: f64,
    v_mom: f64,
}

impl TwoPhotonState {
    pub fn new(terms: Vec<TwoPhotonTerm>, sigma_t: f64) -> Result<TwoPhotonState> {
        if !(sigma_t > 0.0) || !sigma_t.is_finite() {
            return Err(Error::invalid_parameter(
                "sigma_t",
                format!("must be positive and finite, got {sigma_t}"),
            ));
        }
        for t in &terms {
            for p in &t.photons {
                if !p.delay.is_finite() {
                    return Err(Error::invalid_parameter("delay", "must be finite"));
                }
            }
        }
        let mut state = TwoPhotonState {
            terms,
            sigma_t,
            v_pol: 1.0,
            v_mom: 1.0,
        };
        state.canonicalize();
        Ok(state)
    }

    /// Attach the source visibility knobs consumed at detection.
    pub fn with_visibility(mut self, v_pol: f64, v_mom: f64) -> TwoPhotonState {
        self.v_pol = v_pol;
        self.v_mom = v_mom;
        self
    }

    pub fn terms(&self) -> &[TwoPhotonTerm] {
        &self.terms
    }

    pub fn sigma_t(&self) -> f64 {
        self.sigma_t
    }

    pub fn v_pol(&self) -> f64 {
        self.v_pol
    }

    pub fn v_mom(&self) -> f64 {
        self.v_mom
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rebuild the state from an arbitrary term list, preserving σ_t and the
    /// visibility knobs. Used by the element transformations.
    pub fn map_terms<F>(&self, f: F) -> TwoPhotonState
    where
        F: FnMut(&TwoPhotonTerm) -> Vec<TwoPhotonTerm>,
    {
        let mut f = f;
        let terms = self.terms.iter().flat_map(|t| f(t)).collect();
        let mut state = TwoPhotonState {
            terms,
            sigma_t: self.sigma_t,
            v_pol: self.v_pol,
            v_mom: self.v_mom,
        };
        state.canonicalize();
        state
    }

    /// Sort photons within terms, sort terms, merge duplicates, drop
    /// negligible amplitudes. Idempotent.
    pub fn canonicalize(&mut self) {
        for t in self.terms.iter_mut() {
            *t = t.canonical();
        }
        self.terms.sort_by(|x, y| x.cmp_key(y));
        let mut merged: Vec<TwoPhotonTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.same_occupation(&t) && last.branch == t.branch => {
                    last.amplitude += t.amplitude;
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.amplitude.norm() > AMPLITUDE_EPS);
        self.terms = merged;
    }

    /// Sesquilinear inner product `⟨x|y⟩`. `⟨x|x⟩` is real and ≥ 0.
    pub fn inner_product(&self, other: &TwoPhotonState) -> Result<Complex64> {
        if self.sigma_t != other.sigma_t {
            return Err(Error::IncompatibleStates(format!(
                "sigma_t mismatch: {} vs {}",
                self.sigma_t, other.sigma_t
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for tx in &self.terms {
            for ty in &other.terms {
                let ov = term_overlap(tx, ty, self.sigma_t)?;
                if ov != 0.0 {
                    acc += tx.amplitude.conj() * ty.amplitude * ov;
                }
            }
        }
        Ok(acc)
    }

    /// `⟨x|x⟩`, guaranteed real.
    pub fn norm_sqr(&self) -> f64 {
        self.inner_product(self).map(|z| z.re).unwrap_or(0.0)
    }

    /// Scale to unit norm. A fully blocked (empty or numerically zero)
    /// superposition is reported as a [`Error::ZeroState`], distinct from
    /// invalid input.
    pub fn normalize(mut self) -> Result<TwoPhotonState> {
        let n2 = self.norm_sqr();
        if n2 <= 1e-24 {
            return Err(Error::ZeroState);
        }
        let inv = 1.0 / n2.sqrt();
        for t in self.terms.iter_mut() {
            t.amplitude *= inv;
        }
        Ok(self)
    }

    /// True when every photon of every term sits at `stage`.
    pub fn all_at_stage(&self, stage: Stage) -> bool {
        self.terms
            .iter()
            .all(|t| t.photons.iter().all(|p| p.mode.stage == stage))
    }
}
