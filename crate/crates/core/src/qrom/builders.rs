use super::config::{GroupMode, PartitionConfig};
use super::{roles, BuilderKind, BuilderOptions, QromSpec, Uncompute};
use crate::circuit::{Circuit, GateKind, Register};
use crate::error::{Error, Result};

/// Dispatches on `kind`; `config` is required exactly for the pre-decoded family.
pub fn build(
    kind: BuilderKind,
    spec: &QromSpec,
    config: Option<&PartitionConfig>,
    options: &BuilderOptions,
) -> Result<Circuit> {
    match (kind, config) {
        (BuilderKind::Naive, None) => build_naive(spec, options),
        (BuilderKind::Sawtooth, None) => build_sawtooth(spec, options),
        (BuilderKind::Predecoded, Some(c)) => build_predecoded(spec, c, options),
        (BuilderKind::Predecoded, None) => Err(Error::Config(
            "pre-decoded builder needs a partition config".into(),
        )),
        (k, Some(_)) => Err(Error::Config(format!(
            "{k} builder takes no partition config"
        ))),
    }
}

/// X on every listed line whose bit in `value` is clear.
fn flip_zeros(c: &mut Circuit, lines: &[(usize, usize)], value: usize) -> Result<()> {
    for &(qubit, bit) in lines {
        if value >> bit & 1 == 0 {
            c.append(GateKind::X, &[qubit])?;
        }
    }
    Ok(())
}

fn fan_out(c: &mut Circuit, ctrl: usize, data: &Register, word: u64) -> Result<()> {
    for j in 0..data.len {
        if word >> j & 1 == 1 {
            c.append(GateKind::Cx, &[ctrl, data.qubit(j)])?;
        }
    }
    Ok(())
}

/// Address lines as `(qubit, bit)` pairs, MSB first.
fn address_lines(addr: &Register) -> Vec<(usize, usize)> {
    (0..addr.len).rev().map(|i| (addr.qubit(i), i)).collect()
}

fn register(c: &Circuit, name: &str) -> Register {
    c.register(name).expect("builder layout").clone()
}

/// One `C^{n+1}X` per address (twice under mirror uncompute).
pub fn build_naive(spec: &QromSpec, options: &BuilderOptions) -> Result<Circuit> {
    spec.validate()?;
    let mut c = Circuit::with_layout(&[
        (roles::READ, 1),
        (roles::ADDRESS, spec.n),
        (roles::CNOT_CTRL, 1),
        (roles::DATA, spec.d),
    ])?;
    let read = register(&c, roles::READ).qubit(0);
    let lines = address_lines(&register(&c, roles::ADDRESS));
    let ctrl = register(&c, roles::CNOT_CTRL).qubit(0);
    let data = register(&c, roles::DATA);

    let mut mcx_qubits = vec![read];
    mcx_qubits.extend(lines.iter().map(|&(q, _)| q));
    mcx_qubits.push(ctrl);

    for (a, &word) in spec.data.iter().enumerate() {
        flip_zeros(&mut c, &lines, a)?;
        c.append(GateKind::Mcx(spec.n + 1), &mcx_qubits)?;
        flip_zeros(&mut c, &lines, a)?;
        fan_out(&mut c, ctrl, &data, word)?;
        match options.uncompute {
            Uncompute::Mirror => {
                flip_zeros(&mut c, &lines, a)?;
                c.append(GateKind::Mcx(spec.n + 1), &mcx_qubits)?;
                flip_zeros(&mut c, &lines, a)?;
            }
            Uncompute::Reset => {
                c.append(GateKind::Reset, &[ctrl])?;
            }
        }
    }
    Ok(c)
}

/// Toffoli ladder through `n - 1` interleaved ancilla, recomputed per address.
/// Falls back to the naive layout for `n = 1`, where there is no ladder.
pub fn build_sawtooth(spec: &QromSpec, options: &BuilderOptions) -> Result<Circuit> {
    spec.validate()?;
    if spec.n < 2 {
        return build_naive(spec, options);
    }
    let n = spec.n;
    let mut c = Circuit::with_layout(&[
        (roles::READ, 1),
        (roles::ADDRESS, n),
        (roles::LADDER_ANC, n - 1),
        (roles::CNOT_CTRL, 1),
        (roles::DATA, spec.d),
    ])?;
    let read = register(&c, roles::READ).qubit(0);
    let lines = address_lines(&register(&c, roles::ADDRESS));
    let ladder = register(&c, roles::LADDER_ANC);
    let ctrl = register(&c, roles::CNOT_CTRL).qubit(0);
    let data = register(&c, roles::DATA);

    // rung i: (upper input, address line, output)
    let rungs: Vec<[usize; 3]> = (0..n)
        .map(|i| {
            let upper = if i == 0 { read } else { ladder.qubit(i - 1) };
            let out = if i == n - 1 { ctrl } else { ladder.qubit(i) };
            [upper, lines[i].0, out]
        })
        .collect();

    for (a, &word) in spec.data.iter().enumerate() {
        flip_zeros(&mut c, &lines, a)?;
        for r in &rungs {
            c.append(GateKind::Ccx, r)?;
        }
        flip_zeros(&mut c, &lines, a)?;
        fan_out(&mut c, ctrl, &data, word)?;
        match options.uncompute {
            Uncompute::Mirror => {
                flip_zeros(&mut c, &lines, a)?;
                for r in rungs.iter().rev() {
                    c.append(GateKind::Ccx, r)?;
                }
                flip_zeros(&mut c, &lines, a)?;
            }
            Uncompute::Reset => {
                c.append(GateKind::Reset, &[ctrl])?;
                for q in ladder.qubits() {
                    c.append(GateKind::Reset, &[q])?;
                }
            }
        }
    }
    Ok(c)
}

struct DecodedGroup {
    /// `(qubit, bit)` of the group's lines, MSB first.
    lines: Vec<(usize, usize)>,
    /// Lowest address bit covered by the group.
    shift: usize,
    anc: Register,
}

impl DecodedGroup {
    fn minterm(&self, address: usize) -> usize {
        (address >> self.shift) & ((1 << self.lines.len()) - 1)
    }

    /// Stage-1 gates: one `C^m X` per minterm onto its ancilla.
    fn emit(&self, c: &mut Circuit) -> Result<()> {
        let m = self.lines.len();
        for v in 0..1usize << m {
            let local: Vec<(usize, usize)> = self
                .lines
                .iter()
                .map(|&(q, bit)| (q, bit - self.shift))
                .collect();
            let mut qubits: Vec<usize> = self.lines.iter().map(|&(q, _)| q).collect();
            qubits.push(self.anc.qubit(v));
            flip_zeros(c, &local, v)?;
            c.append(GateKind::Mcx(m), &qubits)?;
            flip_zeros(c, &local, v)?;
        }
        Ok(())
    }
}

/// Pre-decodes each P group onto `2^size` ancilla once, then drives every
/// address's MCX from one ancilla per group plus the undecoded lines.
pub fn build_predecoded(
    spec: &QromSpec,
    config: &PartitionConfig,
    options: &BuilderOptions,
) -> Result<Circuit> {
    spec.validate()?;
    if config.total_lines() != spec.n {
        return Err(Error::Config(format!(
            "config {config} covers {} lines, spec has n={}",
            config.total_lines(),
            spec.n
        )));
    }
    let p_sizes: Vec<usize> = config.predecoded_groups().map(|g| g.size).collect();
    if let Some(&m) = p_sizes.iter().find(|&&m| m > 16) {
        return Err(Error::Config(format!(
            "cannot pre-decode {m} lines (2^{m} ancilla)"
        )));
    }
    let anc_names: Vec<String> = (0..p_sizes.len()).map(roles::predecode_anc).collect();
    let mut layout: Vec<(&str, usize)> = vec![(roles::READ, 1), (roles::ADDRESS, spec.n)];
    layout.extend(
        anc_names
            .iter()
            .zip(&p_sizes)
            .map(|(name, &m)| (name.as_str(), 1usize << m)),
    );
    layout.push((roles::CNOT_CTRL, 1));
    layout.push((roles::DATA, spec.d));
    let mut c = Circuit::with_layout(&layout)?;

    let read = register(&c, roles::READ).qubit(0);
    let all_lines = address_lines(&register(&c, roles::ADDRESS));
    let ctrl = register(&c, roles::CNOT_CTRL).qubit(0);
    let data = register(&c, roles::DATA);

    let mut decoded = Vec::new();
    let mut undecoded = Vec::new();
    let mut cursor = 0; // index into all_lines (MSB first)
    for group in config.groups() {
        let lines = all_lines[cursor..cursor + group.size].to_vec();
        cursor += group.size;
        match group.mode {
            GroupMode::P => {
                let shift = lines.last().expect("non-empty group").1;
                let anc = register(&c, &anc_names[decoded.len()]);
                decoded.push(DecodedGroup { lines, shift, anc });
            }
            GroupMode::U => undecoded.extend(lines),
        }
    }

    for g in &decoded {
        g.emit(&mut c)?;
    }

    let k = 1 + decoded.len() + undecoded.len();
    for (a, &word) in spec.data.iter().enumerate() {
        let mut qubits = vec![read];
        qubits.extend(decoded.iter().map(|g| g.anc.qubit(g.minterm(a))));
        qubits.extend(undecoded.iter().map(|&(q, _)| q));
        qubits.push(ctrl);

        flip_zeros(&mut c, &undecoded, a)?;
        c.append(GateKind::Mcx(k), &qubits)?;
        flip_zeros(&mut c, &undecoded, a)?;
        fan_out(&mut c, ctrl, &data, word)?;
        match options.uncompute {
            Uncompute::Mirror => {
                flip_zeros(&mut c, &undecoded, a)?;
                c.append(GateKind::Mcx(k), &qubits)?;
                flip_zeros(&mut c, &undecoded, a)?;
            }
            Uncompute::Reset => {
                c.append(GateKind::Reset, &[ctrl])?;
            }
        }
    }

    match options.uncompute {
        Uncompute::Mirror => {
            for g in decoded.iter().rev() {
                g.emit(&mut c)?;
            }
        }
        Uncompute::Reset => {
            for g in &decoded {
                for q in g.anc.qubits() {
                    c.append(GateKind::Reset, &[q])?;
                }
            }
        }
    }
    Ok(c)
}
