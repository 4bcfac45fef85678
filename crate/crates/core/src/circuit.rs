//! Gate-level circuit IR.
//!
//! A [`Circuit`] is an append-only list of gates over a fixed set of named
//! registers. Qubit ordering is little-endian throughout: qubit 0 is the
//! least significant bit of a basis-state index, and an address value `a`
//! places bit `i` of `a` on address qubit `i`.
//!
//! Multi-qubit gates list their controls first and their target last.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Gate vocabulary shared by builders, the transpiler and the simulators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    Sx,
    Id,
    Rz(f64),
    H,
    Swap,
    Cx,
    Ccx,
    /// X on the target when all `k` controls are set.
    Mcx(usize),
    /// Controlled `X^(±1/2^root)` with `controls` controls (0 means uncontrolled).
    McxRoot {
        controls: usize,
        root: u32,
        dagger: bool,
    },
    Reset,
    Measure,
}

impl GateKind {
    pub fn num_qubits(&self) -> usize {
        match *self {
            GateKind::X
            | GateKind::Sx
            | GateKind::Id
            | GateKind::Rz(_)
            | GateKind::H
            | GateKind::Reset
            | GateKind::Measure => 1,
            GateKind::Swap | GateKind::Cx => 2,
            GateKind::Ccx => 3,
            GateKind::Mcx(k) => k + 1,
            GateKind::McxRoot { controls, .. } => controls + 1,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateKind::Reset | GateKind::Measure)
    }

    /// Member of the hardware basis `{RZ, X, SX, CX, ID}`.
    pub fn is_basis(&self) -> bool {
        matches!(
            self,
            GateKind::Rz(_) | GateKind::X | GateKind::Sx | GateKind::Cx | GateKind::Id
        )
    }

    /// Permutes basis states (no superposition, no phases).
    pub fn is_classical(&self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Swap | GateKind::Cx | GateKind::Ccx | GateKind::Mcx(_)
        )
    }

    pub fn class(&self) -> GateClass {
        match *self {
            GateKind::X => GateClass::X,
            GateKind::Sx => GateClass::Sx,
            GateKind::Id => GateClass::Id,
            GateKind::Rz(_) => GateClass::Rz,
            GateKind::H => GateClass::H,
            GateKind::Swap => GateClass::Swap,
            GateKind::Cx => GateClass::Cx,
            GateKind::Ccx => GateClass::Ccx,
            GateKind::Mcx(k) => GateClass::Mcx(k),
            GateKind::McxRoot {
                controls,
                root,
                dagger,
            } => GateClass::McxRoot {
                controls,
                root,
                dagger,
            },
            GateKind::Reset => GateClass::Reset,
            GateKind::Measure => GateClass::Measure,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            GateKind::Rz(theta) if !theta.is_finite() => Err(Error::InvalidGate(format!(
                "rz angle {theta} is not finite"
            ))),
            GateKind::Mcx(0) => Err(Error::InvalidGate("mcx needs at least one control".into())),
            GateKind::McxRoot { root: 0, .. } => Err(Error::InvalidGate(
                "mcx_root with root exponent 0 is an mcx".into(),
            )),
            GateKind::McxRoot { root, .. } if root > 60 => Err(Error::InvalidGate(format!(
                "mcx_root exponent {root} is too deep"
            ))),
            _ => Ok(()),
        }
    }
}

/// A [`GateKind`] with its continuous parameters erased; used as a histogram key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateClass {
    X,
    Sx,
    Id,
    Rz,
    H,
    Swap,
    Cx,
    Ccx,
    Mcx(usize),
    McxRoot {
        controls: usize,
        root: u32,
        dagger: bool,
    },
    Reset,
    Measure,
}

impl fmt::Display for GateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateClass::X => f.write_str("x"),
            GateClass::Sx => f.write_str("sx"),
            GateClass::Id => f.write_str("id"),
            GateClass::Rz => f.write_str("rz"),
            GateClass::H => f.write_str("h"),
            GateClass::Swap => f.write_str("swap"),
            GateClass::Cx => f.write_str("cx"),
            GateClass::Ccx => f.write_str("ccx"),
            GateClass::Mcx(k) => write!(f, "mcx({k})"),
            GateClass::McxRoot {
                controls,
                root,
                dagger,
            } => {
                let dg = if *dagger { "_dg" } else { "" };
                write!(f, "mcx_root{dg}({controls},{root})")
            }
            GateClass::Reset => f.write_str("reset"),
            GateClass::Measure => f.write_str("measure"),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Rz(theta) => write!(f, "rz({theta})"),
            other => other.class().fmt(f),
        }
    }
}

pub type Qubits = SmallVec<[usize; 3]>;

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Qubits,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Self {
        Gate {
            kind,
            qubits: Qubits::from_slice(qubits),
        }
    }

    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gates act on at least one qubit")
    }

    pub fn controls(&self) -> &[usize] {
        match self.kind {
            GateKind::Cx | GateKind::Ccx | GateKind::Mcx(_) | GateKind::McxRoot { .. } => {
                &self.qubits[..self.qubits.len() - 1]
            }
            _ => &[],
        }
    }
}

/// A named, contiguous block of qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub offset: usize,
    pub len: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, offset: usize, len: usize) -> Self {
        Register {
            name: name.into(),
            offset,
            len,
        }
    }

    pub fn qubit(&self, i: usize) -> usize {
        assert!(i < self.len, "qubit {i} outside register {}", self.name);
        self.offset + i
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    registers: Vec<Register>,
    gates: Vec<Gate>,
    measured: Vec<bool>,
}

impl Circuit {
    /// Registers must tile `[0, total)` with no gaps or overlaps (in any order).
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        let mut spans: Vec<&Register> = registers.iter().collect();
        spans.sort_by_key(|r| r.offset);
        let mut next = 0;
        for r in &spans {
            if r.len == 0 {
                return Err(Error::Registers(format!("register {} is empty", r.name)));
            }
            if r.offset < next {
                return Err(Error::Registers(format!(
                    "register {} at offset {} overlaps a previous register",
                    r.name, r.offset
                )));
            }
            if r.offset > next {
                return Err(Error::Registers(format!(
                    "gap before register {} (qubits {}..{} unassigned)",
                    r.name, next, r.offset
                )));
            }
            next = r.offset + r.len;
        }
        for (i, a) in registers.iter().enumerate() {
            if registers[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Registers(format!(
                    "duplicate register name {}",
                    a.name
                )));
            }
        }
        Ok(Circuit {
            num_qubits: next,
            registers,
            gates: Vec::new(),
            measured: vec![false; next],
        })
    }

    /// Lays registers out back to back in the given order.
    pub fn with_layout(layout: &[(&str, usize)]) -> Result<Self> {
        let mut offset = 0;
        let registers = layout
            .iter()
            .map(|&(name, len)| {
                let r = Register::new(name, offset, len);
                offset += len;
                r
            })
            .collect();
        Circuit::new(registers)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn append(&mut self, kind: GateKind, qubits: &[usize]) -> Result<&mut Self> {
        kind.validate()?;
        let expected = kind.num_qubits();
        if qubits.len() != expected {
            return Err(Error::Arity {
                kind: kind.to_string(),
                expected,
                got: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
            if self.measured[q] {
                return Err(Error::AfterMeasure(q));
            }
        }
        if kind == GateKind::Measure {
            self.measured[qubits[0]] = true;
        }
        self.gates.push(Gate::new(kind, qubits));
        Ok(self)
    }

    /// Appends a gate produced by a pass whose output is valid by construction.
    pub(crate) fn push_trusted(&mut self, gate: Gate) {
        debug_assert!(gate.qubits.iter().all(|&q| q < self.num_qubits));
        if gate.kind == GateKind::Measure {
            self.measured[gate.qubits[0]] = true;
        }
        self.gates.push(gate);
    }

    /// Appends every gate of `other`, which must have the same width.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::Registers(format!(
                "cannot concatenate {}-qubit circuit onto {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        for g in &other.gates {
            self.append(g.kind, &g.qubits)?;
        }
        Ok(())
    }

    /// Same registers, no gates.
    pub fn empty_like(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            registers: self.registers.clone(),
            gates: Vec::new(),
            measured: vec![false; self.num_qubits],
        }
    }

    /// Copy of this circuit with an extra register appended after the last qubit.
    pub fn widened(&self, name: &str, len: usize) -> Result<Circuit> {
        let mut registers = self.registers.clone();
        registers.push(Register::new(name, self.num_qubits, len));
        let mut out = Circuit::new(registers)?;
        out.gates = self.gates.clone();
        out.measured[..self.num_qubits].copy_from_slice(&self.measured);
        Ok(out)
    }

    /// Qubits carrying a MEASURE, in the order the measurements were appended.
    /// Classical bit `i` of a shot outcome is the `i`-th entry.
    pub fn measured_qubits(&self) -> Vec<usize> {
        self.gates
            .iter()
            .filter(|g| g.kind == GateKind::Measure)
            .map(|g| g.qubits[0])
            .collect()
    }

    /// ASAP layer count; every operation (including RESET and MEASURE) is one layer.
    pub fn depth(&self) -> usize {
        let mut layer = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let l = 1 + g.qubits.iter().map(|&q| layer[q]).max().unwrap_or(0);
            for &q in &g.qubits {
                layer[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut by_class = BTreeMap::new();
        for g in &self.gates {
            *by_class.entry(g.kind.class()).or_insert(0) += 1;
        }
        GateCounts {
            by_class,
            total: self.gates.len(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CircuitFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let file: CircuitFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub by_class: BTreeMap<GateClass, usize>,
    pub total: usize,
}

impl GateCounts {
    pub fn get(&self, class: GateClass) -> usize {
        self.by_class.get(&class).copied().unwrap_or(0)
    }

    /// Histogram keyed by display name, for reports.
    pub fn named(&self) -> BTreeMap<String, usize> {
        self.by_class
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    num_qubits: usize,
    registers: Vec<Register>,
    gates: Vec<GateRecord>,
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<f64>>,
    qubits: Vec<usize>,
}

impl From<&Circuit> for CircuitFile {
    fn from(c: &Circuit) -> Self {
        CircuitFile {
            num_qubits: c.num_qubits,
            registers: c.registers.clone(),
            gates: c.gates.iter().map(GateRecord::from).collect(),
        }
    }
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        let (kind, params) = match g.kind {
            GateKind::X => ("x", None),
            GateKind::Sx => ("sx", None),
            GateKind::Id => ("id", None),
            GateKind::Rz(theta) => ("rz", Some(vec![theta])),
            GateKind::H => ("h", None),
            GateKind::Swap => ("swap", None),
            GateKind::Cx => ("cx", None),
            GateKind::Ccx => ("ccx", None),
            GateKind::Mcx(_) => ("mcx", None),
            GateKind::McxRoot { root, dagger, .. } => (
                if dagger { "mcx_root_dg" } else { "mcx_root" },
                Some(vec![root as f64]),
            ),
            GateKind::Reset => ("reset", None),
            GateKind::Measure => ("measure", None),
        };
        GateRecord {
            kind: kind.to_string(),
            params,
            qubits: g.qubits.to_vec(),
        }
    }
}

impl GateRecord {
    fn kind(&self) -> Result<GateKind> {
        let param = |i: usize| -> Result<f64> {
            self.params
                .as_ref()
                .and_then(|p| p.get(i).copied())
                .ok_or_else(|| Error::Serde(format!("gate {} is missing parameter {i}", self.kind)))
        };
        let root = || -> Result<u32> {
            let r = param(0)?;
            if r.fract() != 0.0 || !(1.0..=60.0).contains(&r) {
                return Err(Error::Serde(format!("invalid root exponent {r}")));
            }
            Ok(r as u32)
        };
        let controls = self.qubits.len().saturating_sub(1);
        Ok(match self.kind.as_str() {
            "x" => GateKind::X,
            "sx" => GateKind::Sx,
            "id" => GateKind::Id,
            "rz" => GateKind::Rz(param(0)?),
            "h" => GateKind::H,
            "swap" => GateKind::Swap,
            "cx" => GateKind::Cx,
            "ccx" => GateKind::Ccx,
            "mcx" => GateKind::Mcx(controls),
            "mcx_root" | "mcx_root_dg" => GateKind::McxRoot {
                controls,
                root: root()?,
                dagger: self.kind == "mcx_root_dg",
            },
            "reset" => GateKind::Reset,
            "measure" => GateKind::Measure,
            other => return Err(Error::Serde(format!("unknown gate kind {other:?}"))),
        })
    }
}

impl TryFrom<CircuitFile> for Circuit {
    type Error = Error;

    fn try_from(file: CircuitFile) -> Result<Circuit> {
        let mut c = Circuit::new(file.registers)?;
        if c.num_qubits != file.num_qubits {
            return Err(Error::Serde(format!(
                "num_qubits {} disagrees with registers ({} qubits)",
                file.num_qubits, c.num_qubits
            )));
        }
        for g in &file.gates {
            c.append(g.kind()?, &g.qubits)?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_with_qrom_roles() {
        let c = Circuit::with_layout(&[("read", 1), ("address", 2), ("cnot_ctrl", 1), ("data", 4)])
            .unwrap();
        assert_eq!(c.num_qubits(), 8);
        assert_eq!(c.register("data").unwrap().offset, 4);
        assert_eq!(c.depth(), 0);
    }

    #[test]
    fn single_register() {
        let c = Circuit::with_layout(&[("data", 1)]).unwrap();
        assert_eq!(c.num_qubits(), 1);
        assert_eq!(c.depth(), 0);
    }

    #[test]
    fn overlapping_registers_rejected() {
        let err = Circuit::new(vec![Register::new("a", 0, 2), Register::new("b", 0, 2)]);
        assert!(matches!(err, Err(Error::Registers(_))));
    }

    #[test]
    fn gapped_registers_rejected() {
        let err = Circuit::new(vec![Register::new("a", 0, 2), Register::new("b", 3, 2)]);
        assert!(matches!(err, Err(Error::Registers(_))));
    }

    #[test]
    fn append_errors() {
        let mut c = Circuit::with_layout(&[("q", 6)]).unwrap();
        c.append(GateKind::Mcx(3), &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            c.append(GateKind::Cx, &[5, 5]).unwrap_err(),
            Error::DuplicateQubit(5)
        );
        assert!(matches!(
            c.append(GateKind::Mcx(3), &[0, 1, 2]),
            Err(Error::Arity { expected: 4, .. })
        ));
        assert!(matches!(
            c.append(
                GateKind::McxRoot {
                    controls: 1,
                    root: 0,
                    dagger: false
                },
                &[0, 1]
            ),
            Err(Error::InvalidGate(_))
        ));
        assert!(matches!(
            c.append(GateKind::Rz(f64::NAN), &[0]),
            Err(Error::InvalidGate(_))
        ));

        let mut small = Circuit::with_layout(&[("q", 2)]).unwrap();
        assert!(matches!(
            small.append(GateKind::Rz(0.5), &[2]),
            Err(Error::QubitOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn measure_is_terminal() {
        let mut c = Circuit::with_layout(&[("q", 2)]).unwrap();
        c.append(GateKind::Measure, &[0]).unwrap();
        c.append(GateKind::X, &[1]).unwrap();
        assert_eq!(
            c.append(GateKind::X, &[0]).unwrap_err(),
            Error::AfterMeasure(0)
        );
        assert_eq!(c.measured_qubits(), vec![0]);
    }

    #[test]
    fn depth_layers_parallel_gates() {
        let mut c = Circuit::with_layout(&[("q", 3)]).unwrap();
        c.append(GateKind::X, &[0]).unwrap();
        c.append(GateKind::Cx, &[0, 1]).unwrap();
        c.append(GateKind::X, &[2]).unwrap();
        assert_eq!(c.depth(), 2);
        c.append(GateKind::Reset, &[2]).unwrap();
        assert_eq!(c.depth(), 2);
        c.append(GateKind::Measure, &[1]).unwrap();
        assert_eq!(c.depth(), 3);
    }

    #[test]
    fn empty_counts() {
        let c = Circuit::with_layout(&[("q", 3)]).unwrap();
        let counts = c.gate_counts();
        assert!(counts.by_class.is_empty());
        assert_eq!(counts.total, 0);
    }

    #[test]
    fn json_field_order_and_roundtrip() {
        let mut c = Circuit::with_layout(&[("a", 2), ("b", 2)]).unwrap();
        c.append(GateKind::Rz(0.25), &[0]).unwrap();
        c.append(GateKind::Mcx(3), &[0, 1, 2, 3]).unwrap();
        c.append(
            GateKind::McxRoot {
                controls: 1,
                root: 2,
                dagger: true,
            },
            &[1, 3],
        )
        .unwrap();
        c.append(GateKind::Measure, &[3]).unwrap();
        let json = c.to_json().unwrap();
        let n = json.find("\"num_qubits\"").unwrap();
        let r = json.find("\"registers\"").unwrap();
        let g = json.find("\"gates\"").unwrap();
        assert!(n < r && r < g);
        let k = json.find("\"kind\"").unwrap();
        let p = json.find("\"params\"").unwrap();
        let q = json.find("\"qubits\"").unwrap();
        assert!(k < p && p < q);
        assert_eq!(Circuit::from_json(&json).unwrap(), c);
    }

    #[test]
    fn json_rejects_unknown_kind() {
        let text = r#"{"num_qubits":1,"registers":[{"name":"q","offset":0,"len":1}],
            "gates":[{"kind":"t","qubits":[0]}]}"#;
        assert!(matches!(Circuit::from_json(text), Err(Error::Serde(_))));
    }
}
