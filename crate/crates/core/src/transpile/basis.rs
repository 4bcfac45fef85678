//! Lowering to the `{RZ, X, SX, CX, ID}` hardware basis.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::Result;
use crate::linalg::{self, Mat2};

use super::mcx::{decompose_mcx, decompose_toffoli, McxStrategy};

/// Controlled-U as `C · CX · B · CX · A` on the target plus a phase on the
/// control, with `ABC = I` and `U = e^{iα} AXBXC`.
#[derive(Clone, Debug)]
struct ControlledLowering {
    a: Vec<GateKind>,
    b: Vec<GateKind>,
    c: Vec<GateKind>,
    control_phase: Option<GateKind>,
}

impl ControlledLowering {
    fn new(u: &Mat2) -> Self {
        let z = linalg::zyz(u);
        let a = linalg::mul(&linalg::rz(z.beta), &linalg::ry(z.gamma / 2.0));
        let b = linalg::mul(
            &linalg::ry(-z.gamma / 2.0),
            &linalg::rz(-(z.delta + z.beta) / 2.0),
        );
        let c = linalg::rz((z.delta - z.beta) / 2.0);
        let phase = linalg::normalize_angle(z.alpha);
        ControlledLowering {
            a: linalg::euler_basis(&a),
            b: linalg::euler_basis(&b),
            c: linalg::euler_basis(&c),
            control_phase: (phase.abs() > 1e-12).then_some(GateKind::Rz(phase)),
        }
    }

    fn emit(&self, control: usize, target: usize, out: &mut Circuit) {
        let on_target = |kinds: &[GateKind], out: &mut Circuit| {
            for &k in kinds {
                out.push_trusted(Gate::new(k, &[target]));
            }
        };
        on_target(&self.c, out);
        out.push_trusted(Gate::new(GateKind::Cx, &[control, target]));
        on_target(&self.b, out);
        out.push_trusted(Gate::new(GateKind::Cx, &[control, target]));
        on_target(&self.a, out);
        if let Some(p) = self.control_phase {
            out.push_trusted(Gate::new(p, &[control]));
        }
    }
}

#[derive(Default)]
struct Lowerer {
    controlled_roots: HashMap<(u32, bool), ControlledLowering>,
    roots: HashMap<(u32, bool), Vec<GateKind>>,
}

impl Lowerer {
    fn lower(&mut self, gate: &Gate, strategy: &McxStrategy, out: &mut Circuit) -> Result<()> {
        let q = &gate.qubits;
        match gate.kind {
            GateKind::X
            | GateKind::Sx
            | GateKind::Id
            | GateKind::Rz(_)
            | GateKind::Cx
            | GateKind::Reset
            | GateKind::Measure => out.push_trusted(gate.clone()),
            GateKind::H => {
                for k in [
                    GateKind::Rz(FRAC_PI_2),
                    GateKind::Sx,
                    GateKind::Rz(FRAC_PI_2),
                ] {
                    out.push_trusted(Gate::new(k, &[q[0]]));
                }
            }
            GateKind::Swap => {
                for pair in [[q[0], q[1]], [q[1], q[0]], [q[0], q[1]]] {
                    out.push_trusted(Gate::new(GateKind::Cx, &pair));
                }
            }
            GateKind::Ccx | GateKind::Mcx(2) => {
                for g in decompose_toffoli(gate)? {
                    self.lower(&g, strategy, out)?;
                }
            }
            GateKind::Mcx(_) => {
                for g in decompose_mcx(gate, strategy)? {
                    self.lower(&g, strategy, out)?;
                }
            }
            GateKind::McxRoot {
                controls: 0,
                root,
                dagger,
            } => {
                let kinds = self.roots.entry((root, dagger)).or_insert_with(|| {
                    linalg::euler_basis(&linalg::x_power(linalg::root_exponent(root, dagger)))
                });
                for &k in kinds.iter() {
                    out.push_trusted(Gate::new(k, &[q[0]]));
                }
            }
            GateKind::McxRoot {
                controls: 1,
                root,
                dagger,
            } => {
                self.controlled_roots
                    .entry((root, dagger))
                    .or_insert_with(|| {
                        ControlledLowering::new(&linalg::x_power(linalg::root_exponent(
                            root, dagger,
                        )))
                    })
                    .emit(q[0], q[1], out);
            }
            GateKind::McxRoot { .. } => {
                for g in decompose_mcx(gate, strategy)? {
                    self.lower(&g, strategy, out)?;
                }
            }
        }
        Ok(())
    }
}

/// Rewrites every gate into the hardware basis. RESET and MEASURE pass through;
/// the unitary part is preserved up to global phase.
pub fn to_basis(circuit: &Circuit, strategy: &McxStrategy) -> Result<Circuit> {
    let mut out = circuit.empty_like();
    let mut lowerer = Lowerer::default();
    for g in circuit.gates() {
        lowerer.lower(g, strategy, &mut out)?;
    }
    Ok(out)
}

pub fn is_basis_circuit(circuit: &Circuit) -> bool {
    circuit
        .gates()
        .iter()
        .all(|g| g.kind.is_basis() || !g.kind.is_unitary())
}
