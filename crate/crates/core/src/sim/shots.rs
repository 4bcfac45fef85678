//! Shot-based simulation with stochastic Pauli noise.
//!
//! Each shot is one quantum trajectory. Error locations are drawn up front by
//! geometric skipping over the noisy gates, so a shot costs nothing until its
//! first error. The noiseless run is simulated once: shots without errors
//! sample its final distribution directly, and shots with errors resume from
//! the latest noiseless checkpoint before their first error.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};

use super::noise::NoiseModel;
use super::sparse::{extract_bits, SparseState, MAX_SPARSE_QUBITS};

/// Active-qubit cap for [`run_shots`].
pub const MAX_SHOT_QUBITS: usize = 24;

const CHECKPOINT_INTERVAL: usize = 128;
/// Upper bound on amplitudes held across all checkpoints.
const CHECKPOINT_BUDGET: usize = 1 << 22;
const SHOTS_PER_TASK: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotResult {
    /// Measured bits rendered MSB first: the last MEASURE is the leftmost character.
    pub counts: BTreeMap<String, usize>,
    pub shots: usize,
    pub seed: u64,
}

impl ShotResult {
    pub fn count(&self, key: &str) -> usize {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn probability(&self, key: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(key) as f64 / self.shots as f64
        }
    }
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th stream derived from `master` (the `index + 1`-th
/// output of a SplitMix64 generator seeded with `master`).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    splitmix64(master.wrapping_add(GOLDEN.wrapping_mul(index.wrapping_add(1))))
}

/// Renders the low `width` bits of `value` MSB first.
pub fn render_bits(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|k| if value >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Qubits touched by at least one gate.
pub fn active_qubits(circuit: &Circuit) -> usize {
    let mut used = vec![false; circuit.num_qubits()];
    for g in circuit.gates() {
        for &q in &g.qubits {
            used[q] = true;
        }
    }
    used.into_iter().filter(|&u| u).count()
}

/// Runs `shots` noisy trajectories of a basis-form circuit from `|0…0⟩`.
///
/// Noise follows every basis gate: `p1` after X/SX/RZ/ID, `p2` after CX.
/// RESET measures and flips to `|0⟩`; MEASUREs are read jointly at the end.
/// At most [`MAX_SHOT_QUBITS`] qubits may be touched by gates (idle qubits
/// of a wide device register are free).
pub fn run_shots(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: usize,
    seed: u64,
) -> Result<ShotResult> {
    let active = active_qubits(circuit);
    if active > MAX_SHOT_QUBITS {
        return Err(Error::TooManyQubits {
            what: "shot simulation",
            limit: MAX_SHOT_QUBITS,
            got: active,
        });
    }
    run_shots_uncapped(circuit, noise, shots, seed)
}

pub(crate) fn run_shots_uncapped(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: usize,
    seed: u64,
) -> Result<ShotResult> {
    NoiseModel::new(noise.p1, noise.p2)?;
    if circuit.num_qubits() > MAX_SPARSE_QUBITS {
        return Err(Error::TooManyQubits {
            what: "sparse simulation",
            limit: MAX_SPARSE_QUBITS,
            got: circuit.num_qubits(),
        });
    }
    if let Some(g) = circuit
        .gates()
        .iter()
        .find(|g| g.kind.is_unitary() && !g.kind.is_basis())
    {
        return Err(Error::NotBasis(g.kind.to_string()));
    }
    let program = Program::prepare(circuit)?;
    let tasks: Vec<(usize, usize)> = (0..shots)
        .step_by(SHOTS_PER_TASK)
        .map(|s| (s, (s + SHOTS_PER_TASK).min(shots)))
        .collect();
    let partials: Vec<HashMap<u64, usize>> = tasks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut counts = HashMap::new();
            for shot in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, shot as u64));
                *counts.entry(program.run_shot(noise, &mut rng)).or_insert(0) += 1;
            }
            counts
        })
        .collect();
    let mut merged: BTreeMap<u64, usize> = BTreeMap::new();
    for part in partials {
        for (k, v) in part {
            *merged.entry(k).or_insert(0) += v;
        }
    }
    let width = program.measured.len();
    Ok(ShotResult {
        counts: merged
            .into_iter()
            .map(|(k, v)| (render_bits(k, width), v))
            .collect(),
        shots,
        seed,
    })
}

/// Exact outcome distribution of a noiseless circuit (any gate kinds).
///
/// Every RESET must act on a qubit in a definite state.
pub fn outcome_distribution(circuit: &Circuit) -> Result<BTreeMap<String, f64>> {
    if circuit.num_qubits() > MAX_SPARSE_QUBITS {
        return Err(Error::TooManyQubits {
            what: "sparse simulation",
            limit: MAX_SPARSE_QUBITS,
            got: circuit.num_qubits(),
        });
    }
    let mut state = SparseState::zero();
    for g in circuit.gates() {
        match g.kind {
            GateKind::Measure => {}
            GateKind::Reset => state.reset_deterministic(g.qubits[0])?,
            _ => state.apply(g)?,
        }
    }
    let measured = circuit.measured_qubits();
    let total = state.norm_sqr();
    let mut dist = BTreeMap::new();
    for &(i, a) in state.entries() {
        *dist.entry(extract_bits(i, &measured)).or_insert(0.0) += a.norm_sqr() / total;
    }
    Ok(dist
        .into_iter()
        .map(|(k, p)| (render_bits(k, measured.len()), p))
        .collect())
}

#[derive(Clone, Copy, Debug)]
struct ErrorEvent {
    /// Pauli applied right after this gate.
    gate: usize,
    /// Two bits per operand, first operand in the low bits.
    paulis: u8,
}

/// Per-circuit data shared by all shots.
struct Program<'a> {
    circuit: &'a Circuit,
    measured: Vec<usize>,
    single_sites: Vec<usize>,
    pair_sites: Vec<usize>,
    /// `(k, state)`: noiseless state after the first `k` gates.
    checkpoints: Vec<(usize, SparseState)>,
    /// Cumulative noiseless outcome distribution; `None` if the noiseless run
    /// has a random RESET.
    ideal_cdf: Option<Vec<(f64, u64)>>,
}

impl<'a> Program<'a> {
    fn prepare(circuit: &'a Circuit) -> Result<Self> {
        let mut single_sites = Vec::new();
        let mut pair_sites = Vec::new();
        for (idx, g) in circuit.gates().iter().enumerate() {
            if g.kind.is_unitary() {
                match g.qubits.len() {
                    1 => single_sites.push(idx),
                    _ => pair_sites.push(idx),
                }
            }
        }
        let measured = circuit.measured_qubits();

        let mut state = SparseState::zero();
        let mut checkpoints = vec![(0, state.clone())];
        let mut stored = 1;
        let mut deterministic = true;
        for (idx, g) in circuit.gates().iter().enumerate() {
            match g.kind {
                GateKind::Measure => {}
                GateKind::Reset => {
                    if state.reset_deterministic(g.qubits[0]).is_err() {
                        deterministic = false;
                        break;
                    }
                }
                _ => state.apply(g)?,
            }
            let done = idx + 1;
            if done % CHECKPOINT_INTERVAL == 0 && stored + state.support() <= CHECKPOINT_BUDGET {
                stored += state.support();
                checkpoints.push((done, state.clone()));
            }
        }
        let ideal_cdf = deterministic.then(|| {
            let total = state.norm_sqr();
            let mut by_key: BTreeMap<u64, f64> = BTreeMap::new();
            for &(i, a) in state.entries() {
                *by_key.entry(extract_bits(i, &measured)).or_insert(0.0) += a.norm_sqr() / total;
            }
            let mut acc = 0.0;
            by_key
                .into_iter()
                .map(|(k, p)| {
                    acc += p;
                    (acc, k)
                })
                .collect()
        });
        Ok(Program {
            circuit,
            measured,
            single_sites,
            pair_sites,
            checkpoints,
            ideal_cdf,
        })
    }

    fn draw_events<R: Rng>(
        sites: &[usize],
        p: f64,
        operands: u32,
        rng: &mut R,
        out: &mut Vec<ErrorEvent>,
    ) {
        if p <= 0.0 || sites.is_empty() {
            return;
        }
        let choices = (1u32 << (2 * operands)) - 1;
        let log_q = (1.0 - p).ln();
        let mut pos = 0usize;
        loop {
            let skip = if p >= 1.0 {
                0
            } else {
                let u: f64 = rng.gen();
                let s = ((1.0 - u).ln() / log_q).floor();
                if s >= (sites.len() - pos) as f64 {
                    return;
                }
                s as usize
            };
            pos += skip;
            if pos >= sites.len() {
                return;
            }
            let paulis = rng.gen_range(1..=choices) as u8;
            out.push(ErrorEvent {
                gate: sites[pos],
                paulis,
            });
            pos += 1;
        }
    }

    fn run_shot<R: Rng>(&self, noise: &NoiseModel, rng: &mut R) -> u64 {
        let mut events = Vec::new();
        Self::draw_events(&self.single_sites, noise.p1, 1, rng, &mut events);
        Self::draw_events(&self.pair_sites, noise.p2, 2, rng, &mut events);
        events.sort_unstable_by_key(|e| e.gate);

        if events.is_empty() {
            if let Some(cdf) = &self.ideal_cdf {
                let total = cdf.last().map(|e| e.0).unwrap_or(1.0);
                let r = rng.gen::<f64>() * total;
                let at = cdf.partition_point(|&(c, _)| c <= r).min(cdf.len() - 1);
                return cdf[at].1;
            }
        }

        // Resume no later than the first faulty gate so its Pauli is still applied.
        let first = events.first().map(|e| e.gate).unwrap_or(usize::MAX);
        let ck = self.checkpoints.partition_point(|(k, _)| *k <= first) - 1;
        let (start, ref init) = self.checkpoints[ck];
        let mut state = init.clone();
        let gates = self.circuit.gates();
        let mut next = 0;
        for (idx, g) in gates.iter().enumerate().skip(start) {
            match g.kind {
                GateKind::Measure => {}
                GateKind::Reset => state.reset(g.qubits[0], rng),
                _ => state.apply(g).expect("unitary gates were checked"),
            }
            while next < events.len() && events[next].gate == idx {
                let e = events[next];
                for (k, &q) in g.qubits.iter().enumerate() {
                    state.apply_pauli(q, e.paulis >> (2 * k) & 3);
                }
                next += 1;
            }
        }
        extract_bits(state.sample(rng), &self.measured)
    }
}
