//! Independent brute-force coincidence oracle.
//!
//! The oracle never touches the fast projection path: it expands the
//! two-photon state in the full symmetric tensor basis over the 8 input
//! modes (times an orthonormalized temporal-bin basis when delays differ),
//! applies the beamsplitter as an explicit one-photon unitary on that basis,
//! and sums squared magnitudes over the coincidence basis vectors. Dense
//! linear algebra, allowed to be slow.

use ndarray::Array2;
use num_complex::Complex64;

use crate::detection::DetectorWiring;
use crate::error::{Error, Result};
use crate::fock::{temporal_overlap, Arm, Mode, Stage, TwoPhotonState};

/// Lower-triangular Cholesky factor of a small symmetric positive-definite
/// matrix. The Gram matrix of distinct Gaussian wavepackets is SPD.
fn cholesky(g: &Array2<f64>) -> Result<Array2<f64>> {
    let n = g.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::invalid_parameter(
                        "delays",
                        "temporal Gram matrix not positive definite (delays too close?)",
                    ));
                }
                l[(i, j)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Ok(l)
}

fn mode_index(m: Mode) -> usize {
    // Canonical order over the 8 modes of one stage.
    let path = m.path as usize;
    let arm = match m.arm {
        Arm::One => 0,
        Arm::Two => 1,
    };
    let pol = m.pol as usize;
    (path << 2) | (arm << 1) | pol
}

/// Coincidence probability computed by dense expansion. Preconditions: all
/// photons at the input stage, polarization-insensitive wiring, unit
/// visibility knobs (the oracle models pure-state interference only).
pub fn brute_force_coincidence(state: &TwoPhotonState, wiring: &DetectorWiring) -> Result<f64> {
    wiring.validate()?;
    if !state.all_at_stage(Stage::Input) {
        return Err(Error::InvalidStage(
            "the oracle takes the pre-beamsplitter state".into(),
        ));
    }
    if !wiring.polarization_insensitive || wiring.analyzers.is_some() {
        return Err(Error::InvalidWiring(
            "the oracle supports polarization-insensitive wiring only".into(),
        ));
    }
    if state.v_pol() != 1.0 || state.v_mom() != 1.0 {
        return Err(Error::IncompatibleStates(
            "the oracle requires unit visibility knobs".into(),
        ));
    }
    let sigma = state.sigma_t();

    // Distinct delay values become temporal bins; Cholesky of the Gram
    // matrix expresses each Gaussian wavepacket in an orthonormal basis.
    let mut delays: Vec<f64> = state
        .terms()
        .iter()
        .flat_map(|t| t.photons.iter().map(|p| p.delay))
        .collect();
    delays.sort_by(f64::total_cmp);
    delays.dedup();
    let nb = delays.len();
    let mut gram = Array2::<f64>::zeros((nb, nb));
    for i in 0..nb {
        for j in 0..nb {
            gram[(i, j)] = temporal_overlap(delays[i], delays[j], sigma)?;
        }
    }
    let l = cholesky(&gram)?;
    let bin_of = |d: f64| delays.iter().position(|&x| x == d).expect("delay catalogued");

    // Single-photon space: mode ⊗ temporal bin.
    let n = 8 * nb;
    let sp_index = |mode: usize, bin: usize| mode * nb + bin;

    // One-photon vector of a photon occupation.
    let photon_vec = |mode: Mode, delay: f64| -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        let b = bin_of(delay);
        let m = mode_index(mode);
        for k in 0..nb {
            if l[(b, k)] != 0.0 {
                v[sp_index(m, k)] = Complex64::new(l[(b, k)], 0.0);
            }
        }
        v
    };

    // Two-photon symmetric tensor: a†(f) a†(g)|0⟩ ↔ (f⊗g + g⊗f)/√2.
    let mut psi = Array2::<Complex64>::zeros((n, n));
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for t in state.terms() {
        let f = photon_vec(t.photons[0].mode, t.photons[0].delay);
        let g = photon_vec(t.photons[1].mode, t.photons[1].delay);
        for i in 0..n {
            if f[i].norm() == 0.0 && g[i].norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                psi[(i, j)] += t.amplitude * inv_sqrt2 * (f[i] * g[j] + g[i] * f[j]);
            }
        }
    }

    // Beamsplitter as an explicit 8×8 one-photon unitary (identity on the
    // temporal bins): arm 1 → (arm1' + i arm2')/√2, arm 2 → (i arm1' + arm2')/√2
    // within each (path, pol).
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let im = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let mut u8m = Array2::<Complex64>::zeros((8, 8));
    for input in Mode::all(Stage::Input) {
        let col = mode_index(input);
        let mut cross = input;
        cross.arm = match input.arm {
            Arm::One => Arm::Two,
            Arm::Two => Arm::One,
        };
        // Direct (same-arm) output gets 1/√2, cross-arm output i/√2.
        u8m[(mode_index(Mode::output(input.spatial(), input.pol)), col)] = r;
        u8m[(mode_index(Mode::output(cross.spatial(), cross.pol)), col)] = im;
    }
    let mut u = Array2::<Complex64>::zeros((n, n));
    for row in 0..8 {
        for col in 0..8 {
            if u8m[(row, col)].norm() == 0.0 {
                continue;
            }
            for b in 0..nb {
                u[(sp_index(row, b), sp_index(col, b))] = u8m[(row, col)];
            }
        }
    }

    // ψ' = U ψ Uᵀ (apply U to each tensor factor).
    let psi_out = u.dot(&psi).dot(&u.t());

    // Sum |coefficients|² over ordered pairs with one index per detector
    // side.
    let side_of = |sp: usize| -> Option<u8> {
        let mode = Mode::all(Stage::Output)[sp / nb];
        if wiring.side1.contains(&mode.spatial()) {
            Some(1)
        } else if wiring.side2.contains(&mode.spatial()) {
            Some(2)
        } else {
            None
        }
    };
    let sides: Vec<Option<u8>> = (0..n).map(side_of).collect();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if let (Some(a), Some(b)) = (sides[i], sides[j]) {
                if a != b {
                    acc += psi_out[(i, j)].norm_sqr();
                }
            }
        }
    }
    Ok(acc)
}
