use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linop::C64;
use crate::polyenc::{PolyEncoding, QubitLabel};

/// A spectator qubit: a non-participant label on one ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectatorSlot {
    pub ion: usize,
    pub label: QubitLabel,
}

/// Spectator slots in joint-layout order (ion 0 first, most significant label first).
pub fn spectator_slots(enc: &PolyEncoding, participants: [QubitLabel; 2]) -> Vec<SpectatorSlot> {
    (0..2)
        .flat_map(|ion| {
            enc.labels()
                .iter()
                .filter(move |&&l| l != participants[ion])
                .map(move |&label| SpectatorSlot { ion, label })
        })
        .collect()
}

/// Haar-random pure qubit: a normalized pair of complex Gaussians.
pub fn haar_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    let mut draw = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b) = (draw(), draw());
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / norm, b / norm]
}

/// Spectator states for seed `seed_index` of a run keyed by `rng_seed`.
pub fn spectator_states(rng_seed: u64, seed_index: u64, count: usize) -> Vec<[C64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(seed_index);
    (0..count).map(|_| haar_qubit(&mut rng)).collect()
}

/// Coefficients of a spectator product state on the spectator computational
/// basis, first spectator as the most significant digit.
pub(crate) fn product_coefficients(states: &[[C64; 2]]) -> Vec<C64> {
    states.iter().fold(vec![C64::new(1.0, 0.0)], |acc, q| {
        acc.iter().flat_map(|&c| [c * q[0], c * q[1]]).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_states_are_normalized_and_reproducible() {
        let a = spectator_states(7, 3, 4);
        let b = spectator_states(7, 3, 4);
        assert_eq!(a, b);
        assert_ne!(a, spectator_states(7, 4, 4));
        assert_ne!(a, spectator_states(8, 3, 4));
        for q in &a {
            assert!((q[0].norm_sqr() + q[1].norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn haar_bloch_vectors_average_to_zero() {
        let states = spectator_states(1, 0, 20000);
        let mean_z = states.iter().map(|q| q[0].norm_sqr() - q[1].norm_sqr()).sum::<f64>() / 20000.0;
        let mean_x = states.iter().map(|q| 2.0 * (q[0].conj() * q[1]).re).sum::<f64>() / 20000.0;
        assert!(mean_z.abs() < 0.02 && mean_x.abs() < 0.02);
        // Haar measure makes ⟨z²⟩ = 1/3.
        let z2 = states.iter().map(|q| (q[0].norm_sqr() - q[1].norm_sqr()).powi(2)).sum::<f64>() / 20000.0;
        assert!((z2 - 1.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn slots_skip_participants() {
        let enc = PolyEncoding::new(3).unwrap();
        let slots = spectator_slots(&enc, [QubitLabel::H, QubitLabel::V]);
        let labels: Vec<_> = slots.iter().map(|s| (s.ion, s.label)).collect();
        assert_eq!(
            labels,
            [(0, QubitLabel::D), (0, QubitLabel::V), (1, QubitLabel::D), (1, QubitLabel::H)]
        );
    }

    #[test]
    fn product_coefficients_are_kronecker_ordered() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let c = product_coefficients(&[[zero, one], [one, zero]]);
        assert_eq!(c, [zero, zero, one, zero]);
        assert_eq!(product_coefficients(&[]), [one]);
    }
}
