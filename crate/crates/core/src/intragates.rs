//! Intra-atomic multi-qubit gates built from two-level rotations.
//!
//! A [`GatePulseProgram`] is a time-ordered list of pulse groups. The pulses
//! in one group are driven simultaneously, so the group acts as
//! `exp(−i Σ angle_k s^(axis_k)_{m_k n_k})`. The composed unitary is the
//! global phase times the product of the group unitaries, latest group on the
//! left. Every program carries an independently constructed target matrix it
//! is verified against.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linop::{expm, kron_all, OperatorMatrix, C64, I, ONE, ZERO};
use crate::polyenc::{atomic_pauli, PauliAxis, PolyEncoding, QubitLabel};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub transition: [usize; 2],
    pub axis: PauliAxis,
    /// Coefficient of s^(axis) in the exponent, in radians.
    pub angle: f64,
}

impl Pulse {
    pub fn new(m: usize, n: usize, axis: PauliAxis, angle: f64) -> Self {
        Self {
            transition: [m, n],
            axis,
            angle,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GatePulseProgram {
    name: String,
    encoding: PolyEncoding,
    steps: Vec<Vec<Pulse>>,
    target: OperatorMatrix,
    global_phase: C64,
}

/// Outcome of comparing a program's composed unitary with its target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyReport {
    pub max_entry_error: f64,
    pub unitarity_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Global phase must match.
    Sensitive,
    /// The composed unitary is compared after removing its best-fit global phase.
    Insensitive,
}

/// Flat, serializable form of a program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramListing {
    pub name: String,
    pub qubits_per_atom: usize,
    /// [re, im]
    pub global_phase: [f64; 2],
    pub pulses: Vec<ListedPulse>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ListedPulse {
    pub transition: [usize; 2],
    pub axis: PauliAxis,
    pub angle: f64,
    pub group: usize,
}

impl GatePulseProgram {
    pub fn new(
        name: impl Into<String>,
        encoding: PolyEncoding,
        steps: Vec<Vec<Pulse>>,
        target: OperatorMatrix,
        global_phase: C64,
    ) -> Result<Self> {
        if target.dim() != encoding.level_count() {
            return Err(Error::structural(format!(
                "target of dim {} for an encoding with {} levels",
                target.dim(),
                encoding.level_count()
            )));
        }
        if (global_phase.norm() - 1.0).abs() > tolerances::UNITARITY {
            return Err(Error::domain("global phase must have unit modulus"));
        }
        for pulse in steps.iter().flatten() {
            let [m, n] = pulse.transition;
            // Validates the transition against the encoding.
            atomic_pauli(&encoding, pulse.axis, m, n)?;
        }
        Ok(Self {
            name: name.into(),
            encoding,
            steps,
            target,
            global_phase,
        })
    }

    /// The trivial program: no pulses, identity target.
    pub fn identity(encoding: PolyEncoding) -> Self {
        let dim = encoding.level_count();
        Self {
            name: "identity".into(),
            encoding,
            steps: Vec::new(),
            target: OperatorMatrix::identity(dim),
            global_phase: ONE,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn encoding(&self) -> &PolyEncoding {
        &self.encoding
    }

    pub fn steps(&self) -> &[Vec<Pulse>] {
        &self.steps
    }

    pub fn target(&self) -> &OperatorMatrix {
        &self.target
    }

    pub fn global_phase(&self) -> C64 {
        self.global_phase
    }

    pub fn with_target(mut self, target: OperatorMatrix) -> Result<Self> {
        if target.dim() != self.target.dim() {
            return Err(Error::structural("replacement target has the wrong dimension"));
        }
        self.target = target;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same pulses with one angle perturbed; used to check that verification is sensitive.
    pub fn with_angle_offset(mut self, step: usize, pulse: usize, offset: f64) -> Result<Self> {
        let p = self
            .steps
            .get_mut(step)
            .and_then(|s| s.get_mut(pulse))
            .ok_or_else(|| Error::domain(format!("no pulse {pulse} in step {step}")))?;
        p.angle += offset;
        Ok(self)
    }

    /// Summed generator Σ angle_k s^(axis_k)_{m_k n_k} of one group.
    pub fn group_generator(&self, group: &[Pulse]) -> Result<OperatorMatrix> {
        let mut sum = OperatorMatrix::zeros(self.encoding.level_count());
        for pulse in group {
            let [m, n] = pulse.transition;
            let s = atomic_pauli(&self.encoding, pulse.axis, m, n)?;
            sum = &sum + &s.scale(C64::new(pulse.angle, 0.0));
        }
        Ok(sum)
    }

    pub fn compose(&self) -> Result<OperatorMatrix> {
        let mut u = OperatorMatrix::identity(self.encoding.level_count());
        for group in &self.steps {
            let step = expm(&self.group_generator(group)?, 1.0)?;
            u = &step * &u;
        }
        Ok(u.scale(self.global_phase))
    }

    /// `self` followed by `next`; the target becomes `next.target · self.target`.
    pub fn then(&self, next: &GatePulseProgram) -> Result<Self> {
        if next.encoding != self.encoding {
            return Err(Error::structural("cannot chain programs over different encodings"));
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(Self {
            name: format!("{}; {}", self.name, next.name),
            encoding: self.encoding.clone(),
            steps,
            target: &next.target * &self.target,
            global_phase: self.global_phase * next.global_phase,
        })
    }

    /// Conjugates the program by the level permutation P|k⟩ = |perm[k]⟩.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let target = self.target.permuted(perm)?;
        let steps = self
            .steps
            .iter()
            .map(|group| {
                group
                    .iter()
                    .map(|p| Pulse {
                        transition: [perm[p.transition[0]], perm[p.transition[1]]],
                        ..*p
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            name: self.name.clone(),
            encoding: self.encoding.clone(),
            steps,
            target,
            global_phase: self.global_phase,
        })
    }

    pub fn listing(&self) -> ProgramListing {
        ProgramListing {
            name: self.name.clone(),
            qubits_per_atom: self.encoding.qubits(),
            global_phase: [self.global_phase.re, self.global_phase.im],
            pulses: self
                .steps
                .iter()
                .enumerate()
                .flat_map(|(group, pulses)| {
                    pulses.iter().map(move |p| ListedPulse {
                        transition: p.transition,
                        axis: p.axis,
                        angle: p.angle,
                        group,
                    })
                })
                .collect(),
        }
    }
}

pub fn verify_program(prog: &GatePulseProgram) -> Result<VerifyReport> {
    verify_program_with(prog, PhaseMode::Sensitive)
}

pub fn verify_program_with(prog: &GatePulseProgram, mode: PhaseMode) -> Result<VerifyReport> {
    let mut u = prog.compose()?;
    if mode == PhaseMode::Insensitive {
        let overlap = (&prog.target.adjoint() * &u).trace();
        if overlap.norm() > 0.0 {
            u = u.scale(overlap.conj() / overlap.norm());
        }
    }
    let max_entry_error = u.max_abs_diff(&prog.target);
    let unitarity_error = u.unitarity_error();
    Ok(VerifyReport {
        max_entry_error,
        unitarity_error,
        passed: max_entry_error < tolerances::GATE_SYNTHESIS
            && unitarity_error < tolerances::GATE_SYNTHESIS,
    })
}

fn permutation_matrix(dim: usize, image: impl Fn(usize) -> usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(dim, |i, j| if image(j) == i { ONE } else { ZERO })
}

fn distinct(a: QubitLabel, b: QubitLabel) -> Result<()> {
    if a == b {
        Err(Error::domain(format!("gate needs two distinct qubits, got {a} twice")))
    } else {
        Ok(())
    }
}

/// Textbook CNOT on the encoding's level basis.
pub fn cnot_matrix(enc: &PolyEncoding, control: QubitLabel, target: QubitLabel) -> Result<OperatorMatrix> {
    distinct(control, target)?;
    enc.slot(control)?;
    enc.slot(target)?;
    let (c, t) = (control.bit(), target.bit());
    Ok(permutation_matrix(enc.level_count(), |k| {
        if (k >> c) & 1 == 1 {
            k ^ (1 << t)
        } else {
            k
        }
    }))
}

/// CNOT: a π rotation on every target edge whose control digit is 1, then a
/// π/2 phase shift S on the control, with global phase e^{iπ/4}.
pub fn cnot_program(enc: &PolyEncoding, control: QubitLabel, target: QubitLabel) -> Result<GatePulseProgram> {
    let matrix = cnot_matrix(enc, control, target)?;
    let flips = enc
        .edges(target)?
        .iter()
        .filter(|(m, _)| (m >> control.bit()) & 1 == 1)
        .map(|&(m, n)| Pulse::new(m, n, PauliAxis::X, FRAC_PI_2))
        .collect();
    let phase_shift = enc
        .edges(control)?
        .iter()
        .map(|&(m, n)| Pulse::new(m, n, PauliAxis::Z, FRAC_PI_4))
        .collect();
    GatePulseProgram::new(
        format!("CNOT({control}->{target})"),
        enc.clone(),
        vec![flips, phase_shift],
        matrix,
        C64::from_polar(1.0, FRAC_PI_4),
    )
}

/// Hadamard on one qubit: i·exp(−i(π/2)(σX + σZ)/√2), driven as one group.
pub fn hadamard_program(enc: &PolyEncoding, label: QubitLabel) -> Result<GatePulseProgram> {
    let angle = FRAC_PI_2 * FRAC_1_SQRT_2;
    let pulses = enc
        .edges(label)?
        .iter()
        .flat_map(|&(m, n)| {
            [
                Pulse::new(m, n, PauliAxis::X, angle),
                Pulse::new(m, n, PauliAxis::Z, angle),
            ]
        })
        .collect();
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let had = OperatorMatrix::from_rows(&[vec![s, s], vec![s, -s]])?;
    let factors: Vec<OperatorMatrix> = enc
        .labels()
        .iter()
        .map(|&l| if l == label { had.clone() } else { OperatorMatrix::identity(2) })
        .collect();
    let refs: Vec<&OperatorMatrix> = factors.iter().collect();
    GatePulseProgram::new(format!("H({label})"), enc.clone(), vec![pulses], kron_all(&refs)?, I)
}

/// CZ = H_b · CNOT(a→b) · H_b.
pub fn cz_program(enc: &PolyEncoding, a: QubitLabel, b: QubitLabel) -> Result<GatePulseProgram> {
    distinct(a, b)?;
    let had = hadamard_program(enc, b)?;
    let prog = had.then(&cnot_program(enc, a, b)?)?.then(&had)?;
    let (ba, bb) = (a.bit(), b.bit());
    let diag: Vec<C64> = (0..enc.level_count())
        .map(|k| if (k >> ba) & 1 == 1 && (k >> bb) & 1 == 1 { -ONE } else { ONE })
        .collect();
    Ok(prog
        .with_target(OperatorMatrix::diagonal(&diag))?
        .with_name(format!("CZ({a},{b})")))
}

/// SWAP = CNOT(a→b) · CNOT(b→a) · CNOT(a→b).
pub fn swap_program(enc: &PolyEncoding, a: QubitLabel, b: QubitLabel) -> Result<GatePulseProgram> {
    distinct(a, b)?;
    let ab = cnot_program(enc, a, b)?;
    let prog = ab.then(&cnot_program(enc, b, a)?)?.then(&ab)?;
    let perm = enc.relabeling(a, b)?;
    Ok(prog
        .with_target(permutation_matrix(enc.level_count(), |k| perm[k]))?
        .with_name(format!("SWAP({a},{b})")))
}

/// The Deutsch gate matrix: identity on all but the last two levels, which see
/// [[i cosθ, sinθ], [sinθ, i cosθ]].
pub fn deutsch_matrix(levels: usize, theta: f64) -> OperatorMatrix {
    let (a, b) = (levels - 2, levels - 1);
    let (s, c) = theta.sin_cos();
    OperatorMatrix::from_fn(levels, |i, j| match (i, j) {
        (i, j) if (i == a && j == a) || (i == b && j == b) => C64::new(0.0, c),
        (i, j) if (i == a && j == b) || (i == b && j == a) => C64::new(s, 0.0),
        (i, j) if i == j => ONE,
        _ => ZERO,
    })
}

/// D_3(θ) from an X rotation on |6⟩↔|7⟩ followed by the six-term phase unitary
/// U_67 = e^{iπ/8} exp(−i(π/8)(2s_57 + 2s_46 + s_15 + s_37 + s_04 + s_26)).
pub fn deutsch3_program(theta: f64) -> Result<GatePulseProgram> {
    let enc = PolyEncoding::new(3)?;
    let eighth = PI / 8.0;
    let rotation = vec![Pulse::new(6, 7, PauliAxis::X, theta)];
    let phases = [(5, 7, 2.0), (4, 6, 2.0), (1, 5, 1.0), (3, 7, 1.0), (0, 4, 1.0), (2, 6, 1.0)]
        .into_iter()
        .map(|(m, n, weight)| Pulse::new(m, n, PauliAxis::Z, weight * eighth))
        .collect();
    GatePulseProgram::new(
        format!("D3({theta})"),
        enc,
        vec![rotation, phases],
        deutsch_matrix(8, theta),
        C64::from_polar(1.0, eighth),
    )
}

/// D_p(θ) = e^{iπ/2^p} exp(−i(π/2^p) Σ_{ℓ=0}^{2^p−3} s^Z_{ℓ,f(ℓ)}) exp(−iθ s^X_{2^p−2, 2^p−1})
/// with f(ℓ) = 2^p − 2 + (ℓ mod 2).
pub fn deutsch_p_program(p: usize, theta: f64) -> Result<GatePulseProgram> {
    if !(2..=crate::polyenc::MAX_QUBITS_PER_ATOM).contains(&p) {
        return Err(Error::domain(format!("Deutsch gate needs 2 <= p <= 4, got {p}")));
    }
    let enc = PolyEncoding::new(p)?;
    let levels = enc.level_count();
    let unit = PI / levels as f64;
    let rotation = vec![Pulse::new(levels - 2, levels - 1, PauliAxis::X, theta)];
    let phases = (0..levels - 2)
        .map(|l| Pulse::new(l, levels - 2 + (l % 2), PauliAxis::Z, unit))
        .collect();
    GatePulseProgram::new(
        format!("D{p}({theta})"),
        enc,
        vec![rotation, phases],
        deutsch_matrix(levels, theta),
        C64::from_polar(1.0, unit),
    )
}

/// p-qubit Toffoli: D_p(π/2).
pub fn toffoli_program(p: usize) -> Result<GatePulseProgram> {
    Ok(deutsch_p_program(p, FRAC_PI_2)?.with_name(format!("Toffoli{p}")))
}

/// D_p(θ) with `target` as the rotated qubit and every other qubit a control.
pub fn deutsch_on(enc: &PolyEncoding, target: QubitLabel, theta: f64) -> Result<GatePulseProgram> {
    enc.slot(target)?;
    let base = deutsch_p_program(enc.qubits(), theta)?;
    // Base program rotates V; send V to `target` and `target` to V.
    let perm = enc.relabeling(QubitLabel::V, target)?;
    Ok(base.relabeled(&perm)?.with_name(format!("D{}({theta}; target {target})", enc.qubits())))
}

/// Fredkin gate on a p = 3 atom: swaps `a` and `b` when `control` is 1.
pub fn cswap_program(control: QubitLabel, a: QubitLabel, b: QubitLabel) -> Result<GatePulseProgram> {
    let enc = PolyEncoding::new(3)?;
    distinct(a, b)?;
    distinct(control, a)?;
    distinct(control, b)?;
    let to_b = deutsch_on(&enc, b, FRAC_PI_2)?;
    let to_a = deutsch_on(&enc, a, FRAC_PI_2)?;
    let prog = to_b.then(&to_a)?.then(&to_b)?;
    let (c, ba, bb) = (control.bit(), a.bit(), b.bit());
    let target = permutation_matrix(8, |k| {
        if (k >> c) & 1 == 1 {
            let (da, db) = ((k >> ba) & 1, (k >> bb) & 1);
            (k & !(1 << ba) & !(1 << bb)) | (db << ba) | (da << bb)
        } else {
            k
        }
    });
    Ok(prog
        .with_target(target)?
        .with_name(format!("CSWAP({control}; {a},{b})")))
}

/// Every gate constructor applicable to a p-qubit atom, for bulk verification.
pub fn gate_suite(p: usize) -> Result<Vec<GatePulseProgram>> {
    let enc = PolyEncoding::new(p)?;
    let labels = enc.labels().to_vec();
    let mut suite = Vec::new();
    for &c in &labels {
        for &t in &labels {
            if c != t {
                suite.push(cnot_program(&enc, c, t)?);
            }
        }
    }
    suite.push(deutsch_p_program(p, FRAC_PI_2)?);
    suite.push(toffoli_program(p)?);
    if p == 3 {
        suite.push(deutsch3_program(FRAC_PI_2)?.with_name("Toffoli3 (U67)"));
        suite.push(deutsch3_program(0.3)?);
        suite.push(cswap_program(QubitLabel::D, QubitLabel::H, QubitLabel::V)?);
    }
    suite.push(swap_program(&enc, labels[0], labels[labels.len() - 1])?);
    suite.push(cz_program(&enc, labels[0], labels[labels.len() - 1])?);
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{sigma_x, OperatorMatrix};

    fn assert_passes(prog: &GatePulseProgram) {
        let report = verify_program(prog).unwrap();
        assert!(report.passed, "{}: {report:?}", prog.name());
    }

    #[test]
    fn cnot_h_controls_v_is_block_diagonal_x() {
        let enc = PolyEncoding::new(2).unwrap();
        let prog = cnot_program(&enc, QubitLabel::H, QubitLabel::V).unwrap();
        let u = prog.compose().unwrap();
        let mut expected = OperatorMatrix::identity(4);
        expected = OperatorMatrix::from_fn(4, |i, j| {
            if i < 2 || j < 2 {
                expected.get(i, j)
            } else {
                sigma_x().get(i - 2, j - 2)
            }
        });
        assert!(u.max_abs_diff(&expected) < 1e-10);
        assert_passes(&prog);

        // Matches the literal pulse sequence e^{iπ/4} exp(−iπ/4 σ_H^Z) exp(−iπ/2 s^X_23).
        let listing = prog.listing();
        assert_eq!(listing.pulses[0].transition, [2, 3]);
        assert_eq!(listing.pulses[0].group, 0);
        assert_eq!(listing.pulses.len(), 3);
    }

    #[test]
    fn cnot_control_off_leaves_zero_state() {
        let enc = PolyEncoding::new(2).unwrap();
        let u = cnot_program(&enc, QubitLabel::H, QubitLabel::V).unwrap().compose().unwrap();
        let zero = crate::polyenc::encode_state(&enc, &[0, 0]).unwrap();
        let out = u.apply(&zero).unwrap();
        assert!(out.max_abs_diff(&zero) < 1e-12);
    }

    #[test]
    fn cnot_v_controls_h_via_relabeling() {
        let enc = PolyEncoding::new(2).unwrap();
        let direct = cnot_program(&enc, QubitLabel::V, QubitLabel::H).unwrap();
        let perm = enc.relabeling(QubitLabel::H, QubitLabel::V).unwrap();
        let relabeled = cnot_program(&enc, QubitLabel::H, QubitLabel::V)
            .unwrap()
            .relabeled(&perm)
            .unwrap();
        // Textbook: |01⟩ ↔ |11⟩, i.e. levels 1 and 3 exchanged.
        let textbook = OperatorMatrix::from_fn(4, |i, j| {
            let image = match j {
                1 => 3,
                3 => 1,
                k => k,
            };
            if i == image { ONE } else { ZERO }
        });
        assert!(relabeled.compose().unwrap().max_abs_diff(&textbook) < 1e-10);
        assert!(direct.compose().unwrap().max_abs_diff(&textbook) < 1e-10);
    }

    #[test]
    fn cnot_requires_distinct_labels() {
        let enc = PolyEncoding::new(2).unwrap();
        assert!(matches!(
            cnot_program(&enc, QubitLabel::V, QubitLabel::V),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn deutsch3_special_cases() {
        let toffoli = deutsch3_program(FRAC_PI_2).unwrap().compose().unwrap();
        let textbook = permutation_matrix(8, |k| match k {
            6 => 7,
            7 => 6,
            k => k,
        });
        assert!(toffoli.max_abs_diff(&textbook) < 1e-10);

        // θ = 0 is not the identity: the last two levels pick up a factor i.
        let d0 = deutsch3_program(0.0).unwrap().compose().unwrap();
        let mut diag = vec![ONE; 8];
        diag[6] = I;
        diag[7] = I;
        assert!(d0.max_abs_diff(&OperatorMatrix::diagonal(&diag)) < 1e-10);
        assert!((&d0 * &d0.adjoint()).max_abs_diff(&OperatorMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn deutsch_p_two_matches_cnot() {
        let enc = PolyEncoding::new(2).unwrap();
        let dp = deutsch_p_program(2, FRAC_PI_2).unwrap().compose().unwrap();
        let cnot = cnot_program(&enc, QubitLabel::H, QubitLabel::V).unwrap().compose().unwrap();
        assert!(dp.max_abs_diff(&cnot) < 1e-10);
    }

    #[test]
    fn deutsch_p_four_is_cccnot() {
        let u = deutsch_p_program(4, FRAC_PI_2).unwrap().compose().unwrap();
        let expected = permutation_matrix(16, |k| match k {
            14 => 15,
            15 => 14,
            k => k,
        });
        assert!(u.max_abs_diff(&expected) < 1e-10);
        assert!(u.unitarity_error() < 1e-12);
        assert!(deutsch_p_program(1, 0.0).is_err());
        assert!(deutsch_p_program(5, 0.0).is_err());
    }

    #[test]
    fn general_formula_reproduces_u67_construction() {
        for theta in [0.0, 0.4, FRAC_PI_2, 2.5] {
            let a = deutsch3_program(theta).unwrap().compose().unwrap();
            let b = deutsch_p_program(3, theta).unwrap().compose().unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn verification_detects_corrupted_angle() {
        let enc = PolyEncoding::new(2).unwrap();
        let bad = cnot_program(&enc, QubitLabel::H, QubitLabel::V)
            .unwrap()
            .with_angle_offset(0, 0, 0.01)
            .unwrap();
        let report = verify_program(&bad).unwrap();
        assert!(report.max_entry_error > 1e-3);
        assert!(!report.passed);
        assert!(bad.with_angle_offset(7, 0, 0.1).is_err());
    }

    #[test]
    fn identity_program_has_zero_error() {
        let prog = GatePulseProgram::identity(PolyEncoding::new(2).unwrap());
        let report = verify_program(&prog).unwrap();
        assert_eq!(report.max_entry_error, 0.0);
        assert!(report.passed);
    }

    #[test]
    fn phase_insensitive_mode_ignores_global_phase() {
        let enc = PolyEncoding::new(2).unwrap();
        let prog = cnot_program(&enc, QubitLabel::H, QubitLabel::V).unwrap();
        let target = prog.target().scale(C64::from_polar(1.0, 0.7));
        let shifted = prog.with_target(target).unwrap();
        assert!(!verify_program(&shifted).unwrap().passed);
        assert!(verify_program_with(&shifted, PhaseMode::Insensitive).unwrap().passed);
    }

    #[test]
    fn convenience_gates_verify() {
        let enc2 = PolyEncoding::new(2).unwrap();
        assert_passes(&hadamard_program(&enc2, QubitLabel::V).unwrap());
        assert_passes(&cz_program(&enc2, QubitLabel::H, QubitLabel::V).unwrap());
        assert_passes(&swap_program(&enc2, QubitLabel::H, QubitLabel::V).unwrap());
        assert_passes(&cswap_program(QubitLabel::D, QubitLabel::H, QubitLabel::V).unwrap());
        assert_passes(&cswap_program(QubitLabel::V, QubitLabel::D, QubitLabel::H).unwrap());
        let enc3 = PolyEncoding::new(3).unwrap();
        for target in enc3.labels() {
            assert_passes(&deutsch_on(&enc3, *target, 0.9).unwrap());
        }
    }

    #[test]
    fn suites_verify_for_every_supported_p() {
        for p in 2..=4 {
            for prog in gate_suite(p).unwrap() {
                assert_passes(&prog);
            }
        }
    }

    #[test]
    fn listing_round_trips_through_json() {
        let prog = deutsch3_program(0.25).unwrap();
        let listing = prog.listing();
        let text = serde_json::to_string(&listing).unwrap();
        let back: ProgramListing = serde_json::from_str(&text).unwrap();
        assert_eq!(back, listing);
        assert_eq!(listing.pulses.iter().filter(|p| p.group == 1).count(), 6);
    }
}
