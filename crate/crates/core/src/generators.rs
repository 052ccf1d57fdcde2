//! Test-circuit generators: Brick-Circuit, Random, UCNOT and iQFT.
//!
//! All generators that use single-qubit Haar rotations emit them as three
//! listed gates `RZ(φ) RX(θ) RZ(ω)`, so one rotation counts as three elementary
//! gates.

use alloc::format;
use alloc::string::String;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::sampling::{haar_angles, RngHandle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Bc,
    Rc,
    Ucnot,
    Iqft,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Bc,
        GeneratorKind::Rc,
        GeneratorKind::Ucnot,
        GeneratorKind::Iqft,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GeneratorKind::Bc => "bc",
            GeneratorKind::Rc => "rc",
            GeneratorKind::Ucnot => "ucnot",
            GeneratorKind::Iqft => "iqft",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bc" => Ok(GeneratorKind::Bc),
            "rc" => Ok(GeneratorKind::Rc),
            "ucnot" => Ok(GeneratorKind::Ucnot),
            "iqft" => Ok(GeneratorKind::Iqft),
            other => Err(Error::InvalidArgument(format!("unknown generator `{other}`"))),
        }
    }
}

/// Two-qubit gate used by the Brick-Circuit layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Entangler {
    #[default]
    Cnot,
    Cz,
}

impl Entangler {
    fn kind(self) -> GateKind {
        match self {
            Entangler::Cnot => GateKind::Cnot,
            Entangler::Cz => GateKind::Cz,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Entangler::Cnot => "cnot",
            Entangler::Cz => "cz",
        }
    }
}

impl FromStr for Entangler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cnot" => Ok(Entangler::Cnot),
            "cz" => Ok(Entangler::Cz),
            other => Err(Error::InvalidArgument(format!("unknown entangler `{other}`"))),
        }
    }
}

/// Which generator to run and at what size.
///
/// `depth` means layers for BC and UCNOT, the elementary-gate budget for RC,
/// and is ignored for iQFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub kind: GeneratorKind,
    pub n: usize,
    pub depth: usize,
    pub entangler: Entangler,
}

impl GeneratorConfig {
    pub fn new(kind: GeneratorKind, n: usize, depth: usize) -> Self {
        Self {
            kind,
            n,
            depth,
            entangler: Entangler::default(),
        }
    }

    pub fn generate(&self, rng: &mut RngHandle) -> Result<Circuit> {
        match self.kind {
            GeneratorKind::Bc => gen_bc(self.n, self.depth, self.entangler, rng),
            GeneratorKind::Rc => gen_rc(self.n, self.depth, rng),
            GeneratorKind::Ucnot => gen_ucnot(self.n, self.depth, rng),
            GeneratorKind::Iqft => gen_iqft(self.n, rng),
        }
    }

    /// Elementary gate count every circuit of this configuration has.
    pub fn expected_gate_count(&self) -> usize {
        let n = self.n;
        match self.kind {
            GeneratorKind::Bc => (1..=self.depth)
                .map(|layer| 3 * n + if layer % 2 == 1 { n / 2 } else { (n - 1) / 2 })
                .sum(),
            GeneratorKind::Rc => self.depth,
            GeneratorKind::Ucnot => self.depth * (3 * n + 2 * (n - 1)),
            GeneratorKind::Iqft => 3 * n + n + n * (n - 1) / 2 + 3 * (n / 2),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            GeneratorKind::Iqft => String::from("iqft"),
            k => format!("{}{}", k.as_str(), self.depth),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("generator needs n >= 2, got {n}")));
    }
    Ok(())
}

fn check_depth(depth: usize, what: &str) -> Result<()> {
    if depth == 0 {
        return Err(Error::InvalidArgument(format!("{what} must be >= 1")));
    }
    Ok(())
}

fn push_haar_rotation(c: &mut Circuit, q: usize, rng: &mut RngHandle) -> Result<()> {
    let e = haar_angles(rng);
    c.add_single(GateKind::Rz(e.phi), q)?;
    c.add_single(GateKind::Rx(e.theta), q)?;
    c.add_single(GateKind::Rz(e.omega), q)
}

/// Brick-Circuit: Haar rotations on every qubit, then entanglers on pairs
/// `(i, i+1)` with `i` even on odd layers and `i` odd on even layers.
pub fn gen_bc(n: usize, layers: usize, entangler: Entangler, rng: &mut RngHandle) -> Result<Circuit> {
    check_n(n)?;
    check_depth(layers, "layers")?;
    let mut c = Circuit::new(n)?;
    for layer in 1..=layers {
        for q in 0..n {
            push_haar_rotation(&mut c, q, rng)?;
        }
        let start = if layer % 2 == 1 { 0 } else { 1 };
        for i in (start..n - 1).step_by(2) {
            c.add_two(entangler.kind(), i, i + 1)?;
        }
    }
    Ok(c)
}

const RC_POOL: usize = 11;

/// Random circuit: i.i.d. draws from `{H, X, Y, Z, S, T, RX, RY, RZ, CNOT, CZ}`
/// until the elementary count reaches `gate_budget`.
pub fn gen_rc(n: usize, gate_budget: usize, rng: &mut RngHandle) -> Result<Circuit> {
    check_n(n)?;
    check_depth(gate_budget, "gate budget")?;
    let mut c = Circuit::new(n)?;
    while c.gate_count() < gate_budget {
        let kind = match rng.index(RC_POOL) {
            0 => GateKind::H,
            1 => GateKind::X,
            2 => GateKind::Y,
            3 => GateKind::Z,
            4 => GateKind::S,
            5 => GateKind::T,
            6 => GateKind::Rx(rng.angle()),
            7 => GateKind::Ry(rng.angle()),
            8 => GateKind::Rz(rng.angle()),
            9 => GateKind::Cnot,
            _ => GateKind::Cz,
        };
        if kind.arity() == 1 {
            c.add_single(kind, rng.index(n))?;
        } else {
            let a = rng.index(n);
            let mut b = rng.index(n - 1);
            if b >= a {
                b += 1;
            }
            c.add_two(kind, a, b)?;
        }
    }
    Ok(c)
}

/// UCNOT: per layer a Haar rotation on each qubit, then a CNOT ladder down
/// `(i, i+1)` for `i = 0..n-2` and back up `(i+1, i)` for `i = n-2..0`.
pub fn gen_ucnot(n: usize, layers: usize, rng: &mut RngHandle) -> Result<Circuit> {
    check_n(n)?;
    check_depth(layers, "layers")?;
    let mut c = Circuit::new(n)?;
    for _ in 0..layers {
        for q in 0..n {
            push_haar_rotation(&mut c, q, rng)?;
        }
        for i in 0..n - 1 {
            c.add_two(GateKind::Cnot, i, i + 1)?;
        }
        for i in (0..n - 1).rev() {
            c.add_two(GateKind::Cnot, i + 1, i)?;
        }
    }
    Ok(c)
}

/// Appends the exact inverse of the textbook QFT (bit reversal included).
pub fn push_inverse_qft(c: &mut Circuit) -> Result<()> {
    let n = c.num_qubits();
    for i in 0..n / 2 {
        c.add_two(GateKind::Swap, i, n - 1 - i)?;
    }
    for j in (0..n).rev() {
        for k in ((j + 1)..n).rev() {
            let angle = -PI / (1u64 << (k - j)) as f64;
            c.add_two(GateKind::CPhase(angle), k, j)?;
        }
        c.add_single(GateKind::H, j)?;
    }
    Ok(())
}

/// iQFT generator: a Haar rotation on each qubit followed by the inverse QFT.
pub fn gen_iqft(n: usize, rng: &mut RngHandle) -> Result<Circuit> {
    check_n(n)?;
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        push_haar_rotation(&mut c, q, rng)?;
    }
    push_inverse_qft(&mut c)?;
    Ok(c)
}
