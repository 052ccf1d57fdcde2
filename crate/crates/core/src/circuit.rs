//! Gate vocabulary, circuits, simulation and elementary gate counting.
//!
//! # Text format
//!
//! A circuit serializes to one instruction per line. The first non-comment line
//! is `QUBITS <n>`; every following line is `<GATE> <q>[,<q2>][,<theta>]`, where
//! `<GATE>` is one of `H X Y Z S T RX RY RZ CPHASE CNOT CZ SWAP`. For two-qubit
//! gates the first index is the control (irrelevant for the symmetric `CZ`,
//! `CPHASE` and `SWAP`). Angles are radians written in shortest round-trip form,
//! so parsing the text reproduces the circuit bit for bit. Blank lines and lines
//! starting with `#` are ignored.
//!
//! ```text
//! QUBITS 2
//! RZ 0,1.5707963267948966
//! CNOT 0,1
//! ```

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

#[allow(unused_imports)] // inherent f64 methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMat, C64, ONE, ZERO};
use crate::states::StateVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    /// `diag(1, 1, 1, e^{iθ})`.
    CPhase(f64),
    Cnot,
    Cz,
    Swap,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::CPhase(_) | GateKind::Cnot | GateKind::Cz | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Elementary gates this kind stands for; a SWAP is three CNOTs.
    pub fn elementary_cost(&self) -> usize {
        match self {
            GateKind::Swap => 3,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::CPhase(_) => "CPHASE",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) | GateKind::CPhase(t) => Some(t),
            _ => None,
        }
    }

    fn from_name(name: &str, angle: Option<f64>) -> Option<GateKind> {
        let kind = match (name, angle) {
            ("H", None) => GateKind::H,
            ("X", None) => GateKind::X,
            ("Y", None) => GateKind::Y,
            ("Z", None) => GateKind::Z,
            ("S", None) => GateKind::S,
            ("T", None) => GateKind::T,
            ("RX", Some(t)) => GateKind::Rx(t),
            ("RY", Some(t)) => GateKind::Ry(t),
            ("RZ", Some(t)) => GateKind::Rz(t),
            ("CPHASE", Some(t)) => GateKind::CPhase(t),
            ("CNOT", None) => GateKind::Cnot,
            ("CZ", None) => GateKind::Cz,
            ("SWAP", None) => GateKind::Swap,
            _ => return None,
        };
        Some(kind)
    }

    fn takes_angle(name: &str) -> bool {
        matches!(name, "RX" | "RY" | "RZ" | "CPHASE")
    }

    /// 2×2 matrix of a single-qubit kind, row-major.
    pub fn matrix2(&self) -> Option<[[C64; 2]; 2]> {
        let c = |re: f64, im: f64| C64::new(re, im);
        let h = FRAC_1_SQRT_2;
        Some(match *self {
            GateKind::H => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
            GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::Y => [[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]],
            GateKind::Z => [[ONE, ZERO], [ZERO, c(-1.0, 0.0)]],
            GateKind::S => [[ONE, ZERO], [ZERO, c(0.0, 1.0)]],
            GateKind::T => [[ONE, ZERO], [ZERO, C64::from_polar(1.0, core::f64::consts::FRAC_PI_4)]],
            GateKind::Rx(t) => {
                let (s, co) = ((t / 2.0).sin(), (t / 2.0).cos());
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            GateKind::Ry(t) => {
                let (s, co) = ((t / 2.0).sin(), (t / 2.0).cos());
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            GateKind::Rz(t) => [
                [C64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, C64::from_polar(1.0, t / 2.0)],
            ],
            _ => return None,
        })
    }

    /// 4×4 matrix of a two-qubit kind in the basis `|q_first q_second⟩`.
    pub fn matrix4(&self) -> Option<[[C64; 4]; 4]> {
        let mut m = [[ZERO; 4]; 4];
        match *self {
            GateKind::Cnot => {
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][3] = ONE;
                m[3][2] = ONE;
            }
            GateKind::Cz => {
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][2] = ONE;
                m[3][3] = -ONE;
            }
            GateKind::CPhase(t) => {
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][2] = ONE;
                m[3][3] = C64::from_polar(1.0, t);
            }
            GateKind::Swap => {
                m[0][0] = ONE;
                m[1][2] = ONE;
                m[2][1] = ONE;
                m[3][3] = ONE;
            }
            _ => return None,
        }
        Some(m)
    }
}

/// A gate bound to its target qubit(s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    kind: GateKind,
    first: usize,
    second: Option<usize>,
}

impl Gate {
    pub fn single(kind: GateKind, q: usize) -> Result<Gate> {
        if kind.arity() != 1 {
            return Err(Error::InvalidArgument(format!("{} needs two qubits", kind.name())));
        }
        Ok(Gate {
            kind,
            first: q,
            second: None,
        })
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Result<Gate> {
        if kind.arity() != 2 {
            return Err(Error::InvalidArgument(format!("{} acts on one qubit", kind.name())));
        }
        if a == b {
            return Err(Error::DuplicateQubit(a));
        }
        Ok(Gate {
            kind,
            first: a,
            second: Some(b),
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        (self.first, self.second)
    }

    fn max_qubit(&self) -> usize {
        self.second.map_or(self.first, |b| b.max(self.first))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.name(), self.first)?;
        if let Some(b) = self.second {
            write!(f, ",{b}")?;
        }
        if let Some(t) = self.kind.angle() {
            write!(f, ",{t}")?;
        }
        Ok(())
    }
}

/// Ordered gate list on `n` qubits; the first gate acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Circuit> {
        if n == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        Ok(Circuit {
            n,
            gates: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.n {
            return Err(Error::QubitOutOfRange {
                index: gate.max_qubit(),
                n: self.n,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn add_single(&mut self, kind: GateKind, q: usize) -> Result<()> {
        self.push(Gate::single(kind, q)?)
    }

    pub fn add_two(&mut self, kind: GateKind, a: usize, b: usize) -> Result<()> {
        self.push(Gate::two(kind, a, b)?)
    }

    /// Elementary gate count: each listed gate is 1, a SWAP is 3.
    pub fn gate_count(&self) -> usize {
        self.gates.iter().map(|g| g.kind.elementary_cost()).sum()
    }

    /// State-vector simulation with in-place gate kernels.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.num_qubits() != self.n {
            return Err(Error::QubitCountMismatch {
                expected: self.n,
                found: psi.num_qubits(),
            });
        }
        let mut out = psi.clone();
        for g in &self.gates {
            apply_gate(out.amplitudes_mut(), self.n, g);
        }
        Ok(out)
    }

    /// Output state for the default input `|0…0⟩`.
    pub fn output_state(&self) -> StateVector {
        self.apply(&StateVector::zero_state(self.n).expect("n >= 1"))
            .expect("qubit counts match")
    }

    /// Parses the line format described in the module docs.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let (name, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let name = name.to_ascii_uppercase();
            let rest = rest.trim();
            let Some(c) = circuit.as_mut() else {
                if name != "QUBITS" {
                    return Err(perr("expected `QUBITS <n>` header".to_string()));
                }
                let n: usize = rest
                    .parse()
                    .map_err(|_| perr(format!("bad qubit count `{rest}`")))?;
                circuit = Some(Circuit::new(n).map_err(|e| perr(e.to_string()))?);
                continue;
            };
            let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
            let has_angle = GateKind::takes_angle(&name);
            let (qubit_fields, angle) = if has_angle {
                let (last, qs) = fields
                    .split_last()
                    .ok_or_else(|| perr("missing angle".to_string()))?;
                let t: f64 = last
                    .parse()
                    .map_err(|_| perr(format!("bad angle `{last}`")))?;
                (qs, Some(t))
            } else {
                (&fields[..], None)
            };
            let kind = GateKind::from_name(&name, angle)
                .ok_or_else(|| perr(format!("unknown gate `{name}`")))?;
            let qs: Vec<usize> = qubit_fields
                .iter()
                .map(|s| s.parse().map_err(|_| perr(format!("bad qubit index `{s}`"))))
                .collect::<Result<_>>()?;
            let gate = match (kind.arity(), qs.as_slice()) {
                (1, [q]) => Gate::single(kind, *q),
                (2, [a, b]) => Gate::two(kind, *a, *b),
                _ => return Err(perr(format!("{name} expects {} qubit(s)", kind.arity()))),
            }
            .map_err(|e| perr(e.to_string()))?;
            c.push(gate).map_err(|e| perr(e.to_string()))?;
        }
        circuit.ok_or(Error::Empty("circuit text has no QUBITS header"))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

fn apply_gate(amps: &mut [C64], n: usize, gate: &Gate) {
    match gate.second {
        None => apply_single(amps, n, gate.first, &gate.kind.matrix2().expect("arity 1")),
        Some(b) => apply_two(amps, n, gate.first, b, &gate.kind.matrix4().expect("arity 2")),
    }
}

fn apply_single(amps: &mut [C64], n: usize, q: usize, m: &[[C64; 2]; 2]) {
    let stride = 1usize << (n - 1 - q);
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += 2 * stride;
    }
}

fn apply_two(amps: &mut [C64], n: usize, a: usize, b: usize, m: &[[C64; 4]; 4]) {
    let pa = 1usize << (n - 1 - a);
    let pb = 1usize << (n - 1 - b);
    for i in 0..amps.len() {
        if i & pa != 0 || i & pb != 0 {
            continue;
        }
        let idx = [i, i + pb, i + pa, i + pa + pb];
        let v = idx.map(|j| amps[j]);
        for (r, &j) in idx.iter().enumerate() {
            amps[j] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

/// The gate's full `2^n × 2^n` matrix under the qubit-0-most-significant convention.
pub fn lift_gate(gate: &Gate, n: usize) -> ComplexMat {
    let dim = 1usize << n;
    let mut out = ComplexMat::zeros(dim, dim);
    let weight = |q: usize| 1usize << (n - 1 - q);
    match gate.second {
        None => {
            let m = gate.kind.matrix2().expect("arity 1");
            let p = weight(gate.first);
            for r in 0..dim {
                let lr = usize::from(r & p != 0);
                let env = r & !p;
                for (lc, &entry) in m[lr].iter().enumerate() {
                    out[(r, env | (lc * p))] = entry;
                }
            }
        }
        Some(b) => {
            let m = gate.kind.matrix4().expect("arity 2");
            let (pa, pb) = (weight(gate.first), weight(b));
            for r in 0..dim {
                let lr = 2 * usize::from(r & pa != 0) + usize::from(r & pb != 0);
                let env = r & !(pa | pb);
                for (lc, &entry) in m[lr].iter().enumerate() {
                    let c = env | if lc & 2 != 0 { pa } else { 0 } | if lc & 1 != 0 { pb } else { 0 };
                    out[(r, c)] = entry;
                }
            }
        }
    }
    out
}

/// Product of lifted gate matrices, last gate leftmost.
pub fn circuit_unitary(c: &Circuit) -> ComplexMat {
    let mut u = ComplexMat::identity(1 << c.n);
    for g in &c.gates {
        u = lift_gate(g, c.n).matmul(&u).expect("square matrices of equal size");
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn approx_eq(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3).unwrap();
        assert_eq!(circuit_unitary(&c), ComplexMat::identity(8));
        let psi = StateVector::basis_state(3, 5).unwrap();
        assert_eq!(c.apply(&psi).unwrap(), psi);
    }

    #[test]
    fn single_hadamard_matrix() {
        let mut c = Circuit::new(1).unwrap();
        c.add_single(GateKind::H, 0).unwrap();
        let u = circuit_unitary(&c);
        let h = GateKind::H.matrix2().unwrap();
        assert_eq!(u.as_slice(), &[h[0][0], h[0][1], h[1][0], h[1][1]]);
    }

    #[test]
    fn bell_circuit() {
        let mut c = Circuit::new(2).unwrap();
        c.add_single(GateKind::H, 0).unwrap();
        c.add_two(GateKind::Cnot, 0, 1).unwrap();
        // explicit product CNOT · (H ⊗ I) on |00⟩
        let h = FRAC_1_SQRT_2;
        let expected = vec![C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)];
        let u = circuit_unitary(&c);
        assert!(approx_eq(&u.column(0), &expected, 1e-15));
        assert!(approx_eq(c.output_state().amplitudes(), &expected, 1e-15));
    }

    #[test]
    fn x_on_qubit_zero_sets_most_significant_bit() {
        let mut c = Circuit::new(2).unwrap();
        c.add_single(GateKind::X, 0).unwrap();
        let out = c.output_state();
        assert_eq!(out, StateVector::basis_state(2, 0b10).unwrap());
    }

    #[test]
    fn cnot_orientation() {
        // control 1, target 0: |01⟩ -> |11⟩
        let mut c = Circuit::new(2).unwrap();
        c.add_two(GateKind::Cnot, 1, 0).unwrap();
        let out = c.apply(&StateVector::basis_state(2, 0b01).unwrap()).unwrap();
        assert_eq!(out, StateVector::basis_state(2, 0b11).unwrap());
        assert_eq!(
            circuit_unitary(&c).column(1),
            StateVector::basis_state(2, 0b11).unwrap().into_amplitudes()
        );
    }

    #[test]
    fn gate_counting() {
        let mut c = Circuit::new(3).unwrap();
        c.add_single(GateKind::Rz(0.1), 0).unwrap();
        c.add_two(GateKind::Swap, 0, 2).unwrap();
        c.add_two(GateKind::CPhase(0.3), 2, 1).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.gate_count(), 5);
    }

    #[test]
    fn rotation_conventions() {
        let t = 0.7;
        let rz = GateKind::Rz(t).matrix2().unwrap();
        assert!((rz[0][0] - C64::from_polar(1.0, -t / 2.0)).norm() < 1e-15);
        let rx = GateKind::Rx(t).matrix2().unwrap();
        assert!((rx[0][1] - C64::new(0.0, -(t / 2.0).sin())).norm() < 1e-15);
    }

    #[test]
    fn invalid_gates_rejected() {
        let mut c = Circuit::new(2).unwrap();
        assert!(matches!(
            c.add_single(GateKind::H, 2),
            Err(Error::QubitOutOfRange { index: 2, n: 2 })
        ));
        assert!(c.add_two(GateKind::Cnot, 1, 1).is_err());
        assert!(c.add_two(GateKind::H, 0, 1).is_err());
        assert!(c.add_single(GateKind::Swap, 0).is_err());
        let psi = StateVector::zero_state(3).unwrap();
        assert!(matches!(
            c.apply(&psi),
            Err(Error::QubitCountMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn text_roundtrip() {
        let mut c = Circuit::new(3).unwrap();
        c.add_single(GateKind::Rz(-1.234_567_890_123_456_7), 2).unwrap();
        c.add_single(GateKind::T, 1).unwrap();
        c.add_two(GateKind::CPhase(core::f64::consts::PI / 8.0), 0, 2).unwrap();
        c.add_two(GateKind::Swap, 0, 1).unwrap();
        let text = c.to_string();
        assert!(text.starts_with("QUBITS 3\nRZ 2,-1.2345678901234567\n"));
        assert_eq!(Circuit::parse(&text).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Circuit::parse(""), Err(Error::Empty(_))));
        assert!(matches!(Circuit::parse("H 0"), Err(Error::Parse { line: 1, .. })));
        let bad = "QUBITS 2\n# comment\nFOO 1\n";
        assert!(matches!(Circuit::parse(bad), Err(Error::Parse { line: 3, .. })));
        assert!(Circuit::parse("QUBITS 2\nRX 0\n").is_err());
        assert!(Circuit::parse("QUBITS 2\nCNOT 0\n").is_err());
        assert!(Circuit::parse("QUBITS 2\nH 5\n").is_err());
    }
}
