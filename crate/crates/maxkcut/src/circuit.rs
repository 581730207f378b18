//! Gate-level circuit representation, gate census, and CX-equivalent cost
//! accounting.
//!
//! Control polarity is part of the gate: every control is a `(qubit, bit)`
//! pair, so an "open" control (fire on |0>) never needs explicit X
//! conjugation in the gate list. Multi-controlled phases are stored as pure
//! pattern diagonals over their whole qubit set, since a controlled phase
//! has no distinguished target.

use std::collections::BTreeMap;
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

/// Hard cap for dense unitary construction (`2^n` squared entries).
pub const DEFAULT_UNITARY_QUBIT_CAP: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a circuit on {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate uses qubit {0} more than once")]
    RepeatedQubit(usize),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("dense unitary needs {num_qubits} qubits, above the cap {cap}")]
    UnitaryCap { num_qubits: usize, cap: usize },
    #[error("no CX-cost table entry for gate class {0}")]
    MissingTableEntry(String),
}

/// One Pauli axis of a Pauli-string rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'X' => Some(PauliAxis::X),
            'Y' => Some(PauliAxis::Y),
            'Z' => Some(PauliAxis::Z),
            _ => None,
        }
    }
}

/// A control condition: the gate fires only when `qubit` is in basis state
/// `bit`.
pub type Control = (usize, bool);

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Pauli X on `target`, optionally controlled (covers X, CX, C^mX).
    X { controls: Vec<Control>, target: usize },
    /// Hadamard, optionally controlled.
    H { controls: Vec<Control>, target: usize },
    Rx { target: usize, theta: f64 },
    /// Y rotation, optionally controlled.
    Ry { controls: Vec<Control>, target: usize, theta: f64 },
    Rz { target: usize, theta: f64 },
    /// Diagonal phase: multiplies by `e^{it}` exactly the basis states where
    /// every listed qubit matches its bit (covers Ph, CPh, C^mPh).
    Phase { pattern: Vec<Control>, t: f64 },
    /// `exp(-i t/4 (XX + YY))` on the qubit pair `(a, b)`.
    Rxy { a: usize, b: usize, t: f64 },
    /// `exp(-i theta/2 P)` for the Pauli string with `axes[i]` on
    /// `qubits[i]`.
    PauliRot { qubits: Vec<usize>, axes: Vec<PauliAxis>, theta: f64 },
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Gate::X { controls: vec![], target }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::X { controls: vec![(control, true)], target }
    }

    /// CX that fires when the control is |0>.
    pub fn cx_open(control: usize, target: usize) -> Self {
        Gate::X { controls: vec![(control, false)], target }
    }

    pub fn ccx(c1: usize, c2: usize, target: usize) -> Self {
        Gate::X { controls: vec![(c1, true), (c2, true)], target }
    }

    pub fn h(target: usize) -> Self {
        Gate::H { controls: vec![], target }
    }

    pub fn ph(qubit: usize, t: f64) -> Self {
        Gate::Phase { pattern: vec![(qubit, true)], t }
    }

    /// Phase `e^{it}` on the basis states matching `pattern`.
    pub fn pattern_phase(pattern: Vec<Control>, t: f64) -> Self {
        Gate::Phase { pattern, t }
    }

    pub fn pauli_rot(spec: &str, qubits: &[usize], theta: f64) -> Self {
        assert_eq!(spec.len(), qubits.len(), "axes string and qubit list must match");
        let mut qs = Vec::new();
        let mut axes = Vec::new();
        for (c, &q) in spec.chars().zip(qubits) {
            if c == 'I' {
                continue;
            }
            qs.push(q);
            axes.push(PauliAxis::from_char(c).expect("axes must be one of I, X, Y, Z"));
        }
        assert!(!qs.is_empty(), "Pauli rotation needs at least one non-identity axis");
        Gate::PauliRot { qubits: qs, axes, theta }
    }

    /// Every qubit the gate touches (controls included).
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X { controls, target } | Gate::H { controls, target } => {
                controls.iter().map(|c| c.0).chain([*target]).collect()
            }
            Gate::Ry { controls, target, .. } => {
                controls.iter().map(|c| c.0).chain([*target]).collect()
            }
            Gate::Rx { target, .. } | Gate::Rz { target, .. } => vec![*target],
            Gate::Phase { pattern, .. } => pattern.iter().map(|c| c.0).collect(),
            Gate::Rxy { a, b, .. } => vec![*a, *b],
            Gate::PauliRot { qubits, .. } => qubits.clone(),
        }
    }

    /// The inverse gate.
    pub fn dagger(&self) -> Gate {
        match self {
            Gate::X { .. } | Gate::H { .. } => self.clone(),
            Gate::Rx { target, theta } => Gate::Rx { target: *target, theta: -theta },
            Gate::Ry { controls, target, theta } => {
                Gate::Ry { controls: controls.clone(), target: *target, theta: -theta }
            }
            Gate::Rz { target, theta } => Gate::Rz { target: *target, theta: -theta },
            Gate::Phase { pattern, t } => Gate::Phase { pattern: pattern.clone(), t: -t },
            Gate::Rxy { a, b, t } => Gate::Rxy { a: *a, b: *b, t: -t },
            Gate::PauliRot { qubits, axes, theta } => {
                Gate::PauliRot { qubits: qubits.clone(), axes: axes.clone(), theta: -theta }
            }
        }
    }

    /// Same gate with all qubit indices shifted up by `offset`.
    pub fn shifted(&self, offset: usize) -> Gate {
        let sc = |cs: &[Control]| cs.iter().map(|&(q, b)| (q + offset, b)).collect();
        match self {
            Gate::X { controls, target } => {
                Gate::X { controls: sc(controls), target: target + offset }
            }
            Gate::H { controls, target } => {
                Gate::H { controls: sc(controls), target: target + offset }
            }
            Gate::Rx { target, theta } => Gate::Rx { target: target + offset, theta: *theta },
            Gate::Ry { controls, target, theta } => Gate::Ry {
                controls: sc(controls),
                target: target + offset,
                theta: *theta,
            },
            Gate::Rz { target, theta } => Gate::Rz { target: target + offset, theta: *theta },
            Gate::Phase { pattern, t } => Gate::Phase { pattern: sc(pattern), t: *t },
            Gate::Rxy { a, b, t } => Gate::Rxy { a: a + offset, b: b + offset, t: *t },
            Gate::PauliRot { qubits, axes, theta } => Gate::PauliRot {
                qubits: qubits.iter().map(|q| q + offset).collect(),
                axes: axes.clone(),
                theta: *theta,
            },
        }
    }

    pub fn class(&self) -> GateClass {
        match self {
            Gate::X { controls, .. } => GateClass::X(controls.len()),
            Gate::H { controls, .. } => GateClass::H(controls.len()),
            Gate::Rx { .. } => GateClass::Rx,
            Gate::Ry { controls, .. } => GateClass::Ry(controls.len()),
            Gate::Rz { .. } => GateClass::Rz,
            Gate::Phase { pattern, .. } => GateClass::Phase(pattern.len().saturating_sub(1)),
            Gate::Rxy { .. } => GateClass::Rxy,
            Gate::PauliRot { qubits, .. } => GateClass::PauliRot(qubits.len()),
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= num_qubits {
                return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        let mut sorted = qs;
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(CircuitError::RepeatedQubit(w[0]));
            }
        }
        if let Gate::Phase { pattern, .. } = self {
            if pattern.is_empty() {
                return Err(CircuitError::InvalidGate("phase gate with no qubits".into()));
            }
        }
        if let Gate::Rxy { a, b, .. } = self {
            if a == b {
                return Err(CircuitError::InvalidGate("Rxy needs two distinct qubits".into()));
            }
        }
        Ok(())
    }
}

/// Gate class for census and cost accounting: the kind together with its
/// control count (or Pauli weight).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GateClass {
    X(usize),
    H(usize),
    Rx,
    Ry(usize),
    Rz,
    Phase(usize),
    Rxy,
    PauliRot(usize),
}

impl fmt::Display for GateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn controlled(f: &mut fmt::Formatter<'_>, c: usize, base: &str) -> fmt::Result {
            match c {
                0 => write!(f, "{base}"),
                1 => write!(f, "C{base}"),
                m => write!(f, "C{m}{base}"),
            }
        }
        match self {
            GateClass::X(c) => controlled(f, *c, "X"),
            GateClass::H(c) => controlled(f, *c, "H"),
            GateClass::Rx => write!(f, "Rx"),
            GateClass::Ry(c) => controlled(f, *c, "Ry"),
            GateClass::Rz => write!(f, "Rz"),
            GateClass::Phase(c) => controlled(f, *c, "Ph"),
            GateClass::Rxy => write!(f, "RXY"),
            GateClass::PauliRot(w) => write!(f, "RP{w}"),
        }
    }
}

impl std::str::FromStr for GateClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "Rx" {
            return Ok(GateClass::Rx);
        }
        if s == "Rz" {
            return Ok(GateClass::Rz);
        }
        if s == "RXY" {
            return Ok(GateClass::Rxy);
        }
        if let Some(w) = s.strip_prefix("RP") {
            return w.parse().map(GateClass::PauliRot).map_err(|e| e.to_string());
        }
        let (controls, rest) = if let Some(rest) = s.strip_prefix('C') {
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                (1, rest)
            } else {
                (digits.parse().map_err(|e: std::num::ParseIntError| e.to_string())?, &rest[digits.len()..])
            }
        } else {
            (0, s)
        };
        match rest {
            "X" => Ok(GateClass::X(controls)),
            "H" => Ok(GateClass::H(controls)),
            "Ph" => Ok(GateClass::Phase(controls)),
            "Ry" => Ok(GateClass::Ry(controls)),
            _ => Err(format!("unknown gate class {s:?}")),
        }
    }
}

/// Gate counts keyed by class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Census(pub BTreeMap<GateClass, usize>);

impl Census {
    pub fn count(&self, class: GateClass) -> usize {
        self.0.get(&class).copied().unwrap_or(0)
    }

    pub fn add(&mut self, other: &Census) {
        for (&class, &n) in &other.0 {
            *self.0.entry(class).or_insert(0) += n;
        }
    }

    /// Scales all counts, e.g. per-edge counts to a whole layer.
    pub fn scaled(&self, factor: usize) -> Census {
        Census(self.0.iter().map(|(&c, &n)| (c, n * factor)).collect())
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "(empty)");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(class, n)| format!("{n}{class}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl FromIterator<(GateClass, usize)> for Census {
    fn from_iter<T: IntoIterator<Item = (GateClass, usize)>>(iter: T) -> Self {
        Census(iter.into_iter().collect())
    }
}

/// An ordered list of gates over `num_qubits` indexed qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
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

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends another circuit (same qubit count assumed by the caller).
    pub fn concat(&mut self, other: &Circuit) {
        assert!(other.num_qubits <= self.num_qubits);
        self.gates.extend(other.gates.iter().cloned());
    }

    /// Appends `other` with its qubits shifted up by `offset`.
    pub fn concat_shifted(&mut self, other: &Circuit, offset: usize) -> Result<(), CircuitError> {
        for g in &other.gates {
            self.push(g.shifted(offset))?;
        }
        Ok(())
    }

    /// The inverse circuit: reversed gate order, each gate inverted.
    pub fn dagger(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::dagger).collect(),
        }
    }

    /// Gate counts keyed by `(kind, number of controls)`.
    pub fn census(&self) -> Census {
        let mut census = Census::default();
        for g in &self.gates {
            *census.0.entry(g.class()).or_insert(0) += 1;
        }
        census
    }

    /// Dense `2^n x 2^n` unitary of the gate product, applied in list order.
    pub fn unitary(&self) -> Result<Array2<C64>, CircuitError> {
        self.unitary_with_cap(DEFAULT_UNITARY_QUBIT_CAP)
    }

    pub fn unitary_with_cap(&self, cap: usize) -> Result<Array2<C64>, CircuitError> {
        if self.num_qubits > cap {
            return Err(CircuitError::UnitaryCap { num_qubits: self.num_qubits, cap });
        }
        let dim = 1usize << self.num_qubits;
        let mut u = Array2::<C64>::eye(dim);
        for g in &self.gates {
            let gm = gate_matrix(g, self.num_qubits);
            u = gm.dot(&u);
        }
        Ok(u)
    }
}

/// Builds the full `2^n x 2^n` matrix of a single gate from its definition,
/// column by column. Independent of the statevector kernels.
pub fn gate_matrix(gate: &Gate, num_qubits: usize) -> Array2<C64> {
    let n = num_qubits;
    let dim = 1usize << n;
    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
    let mask = |q: usize| 1usize << (n - 1 - q);
    let controls_match =
        |x: usize, cs: &[Control]| cs.iter().all(|&(q, b)| bit(x, q) == b as usize);

    let mut m = Array2::<C64>::zeros((dim, dim));
    let one = C64::new(1.0, 0.0);
    for col in 0..dim {
        match gate {
            Gate::X { controls, target } => {
                if controls_match(col, controls) {
                    m[[col ^ mask(*target), col]] = one;
                } else {
                    m[[col, col]] = one;
                }
            }
            Gate::H { controls, target } => {
                if controls_match(col, controls) {
                    let s = std::f64::consts::FRAC_1_SQRT_2;
                    let sign = if bit(col, *target) == 1 { -s } else { s };
                    m[[col, col]] = C64::new(sign, 0.0);
                    m[[col ^ mask(*target), col]] = C64::new(s, 0.0);
                } else {
                    m[[col, col]] = one;
                }
            }
            Gate::Rx { target, theta } => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                m[[col, col]] = C64::new(c, 0.0);
                m[[col ^ mask(*target), col]] = C64::new(0.0, -s);
            }
            Gate::Ry { controls, target, theta } => {
                if controls_match(col, controls) {
                    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                    m[[col, col]] = C64::new(c, 0.0);
                    // |0> -> +s |1>, |1> -> -s |0>.
                    let sign = if bit(col, *target) == 0 { s } else { -s };
                    m[[col ^ mask(*target), col]] = C64::new(sign, 0.0);
                } else {
                    m[[col, col]] = one;
                }
            }
            Gate::Rz { target, theta } => {
                let phase = if bit(col, *target) == 0 { -theta / 2.0 } else { theta / 2.0 };
                m[[col, col]] = C64::from_polar(1.0, phase);
            }
            Gate::Phase { pattern, t } => {
                m[[col, col]] = if controls_match(col, pattern) {
                    C64::from_polar(1.0, *t)
                } else {
                    one
                };
            }
            Gate::Rxy { a, b, t } => {
                let (ba, bb) = (bit(col, *a), bit(col, *b));
                if ba == bb {
                    m[[col, col]] = one;
                } else {
                    let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                    m[[col, col]] = C64::new(c, 0.0);
                    m[[col ^ mask(*a) ^ mask(*b), col]] = C64::new(0.0, -s);
                }
            }
            Gate::PauliRot { qubits, axes, theta } => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                // P|col> = lambda |col ^ flips>
                let mut flips = 0usize;
                let mut lambda = one;
                for (&q, &ax) in qubits.iter().zip(axes) {
                    match ax {
                        PauliAxis::X => flips ^= mask(q),
                        PauliAxis::Y => {
                            flips ^= mask(q);
                            lambda *= if bit(col, q) == 0 {
                                C64::new(0.0, 1.0)
                            } else {
                                C64::new(0.0, -1.0)
                            };
                        }
                        PauliAxis::Z => {
                            if bit(col, q) == 1 {
                                lambda = -lambda;
                            }
                        }
                    }
                }
                m[[col, col]] += C64::new(c, 0.0);
                m[[col ^ flips, col]] += C64::new(0.0, -s) * lambda;
            }
        }
    }
    m
}

// ============================================================================
// CX-equivalent cost
// ============================================================================

/// CX counts per gate class. The built-in table uses standard ancilla-free
/// decompositions:
///
/// * `C^mX`: 1, 6, 14 for m = 1, 2, 3
/// * `C^mPh`: `m(m+1)(m+2)/3` (2, 8, 20, 40, ...)
/// * `CH` 1, `CRy` 2, `RXY` 2
/// * Pauli-string rotation of weight w: `2(w-1)`
/// * single-qubit gates: 0
#[derive(Debug, Clone)]
pub struct CostTable {
    entries: BTreeMap<GateClass, u64>,
}

impl Default for CostTable {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(GateClass::X(0), 0);
        entries.insert(GateClass::X(1), 1);
        entries.insert(GateClass::X(2), 6);
        entries.insert(GateClass::X(3), 14);
        entries.insert(GateClass::H(0), 0);
        entries.insert(GateClass::H(1), 1);
        entries.insert(GateClass::Rx, 0);
        entries.insert(GateClass::Ry(0), 0);
        entries.insert(GateClass::Ry(1), 2);
        entries.insert(GateClass::Rz, 0);
        for m in 0..=6usize {
            let cost = (m * (m + 1) * (m + 2) / 3) as u64;
            entries.insert(GateClass::Phase(m), cost);
        }
        entries.insert(GateClass::Rxy, 2);
        for w in 1..=8usize {
            entries.insert(GateClass::PauliRot(w), 2 * (w as u64 - 1));
        }
        Self { entries }
    }
}

impl CostTable {
    /// Parses a JSON map like `{"CX": 1, "C2Ph": 8, "RP3": 4}`. Entries not
    /// present fall back to the defaults.
    pub fn from_json(json: &str) -> Result<Self, String> {
        let raw: BTreeMap<String, u64> =
            serde_json::from_str(json).map_err(|e| e.to_string())?;
        let mut table = Self::default();
        for (key, val) in raw {
            let class: GateClass = key.parse()?;
            table.entries.insert(class, val);
        }
        Ok(table)
    }

    pub fn cost_of(&self, class: GateClass) -> Option<u64> {
        self.entries.get(&class).copied()
    }
}

/// Total CX-equivalent cost of a circuit under a decomposition table.
pub fn cx_equivalent_cost(c: &Circuit, table: &CostTable) -> Result<u64, CircuitError> {
    let mut total = 0u64;
    for (&class, &count) in &c.census().0 {
        let per = table
            .cost_of(class)
            .ok_or_else(|| CircuitError::MissingTableEntry(class.to_string()))?;
        total += per * count as u64;
    }
    Ok(total)
}

// ============================================================================
// Serialization
// ============================================================================
//
// Each gate becomes `{"gate": name, "qubits": [...], "controls": [...],
// "pattern": "010", "param": t}`; `controls`/`pattern`/`param` are omitted
// when empty. Phase gates carry their whole qubit set in `qubits` with
// `pattern` spanning all of them.

#[derive(Serialize, Deserialize)]
struct GateRecord {
    gate: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    controls: Vec<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pattern: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    axes: String,
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    num_qubits: usize,
    gates: Vec<GateRecord>,
}

fn pattern_string(cs: &[Control]) -> String {
    cs.iter().map(|&(_, b)| if b { '1' } else { '0' }).collect()
}

fn controls_from(qubits: &[usize], pattern: &str) -> Result<Vec<Control>, String> {
    if qubits.len() != pattern.len() {
        return Err(format!(
            "pattern length {} does not match {} control qubits",
            pattern.len(),
            qubits.len()
        ));
    }
    qubits
        .iter()
        .zip(pattern.chars())
        .map(|(&q, c)| match c {
            '0' => Ok((q, false)),
            '1' => Ok((q, true)),
            _ => Err(format!("pattern must be over 0/1, got {c:?}")),
        })
        .collect()
}

impl Gate {
    fn to_record(&self) -> GateRecord {
        let mut rec = GateRecord {
            gate: String::new(),
            qubits: vec![],
            controls: vec![],
            pattern: String::new(),
            param: None,
            axes: String::new(),
        };
        match self {
            Gate::X { controls, target } => {
                rec.gate = "x".into();
                rec.qubits = vec![*target];
                rec.controls = controls.iter().map(|c| c.0).collect();
                rec.pattern = pattern_string(controls);
            }
            Gate::H { controls, target } => {
                rec.gate = "h".into();
                rec.qubits = vec![*target];
                rec.controls = controls.iter().map(|c| c.0).collect();
                rec.pattern = pattern_string(controls);
            }
            Gate::Rx { target, theta } => {
                rec.gate = "rx".into();
                rec.qubits = vec![*target];
                rec.param = Some(*theta);
            }
            Gate::Ry { controls, target, theta } => {
                rec.gate = "ry".into();
                rec.qubits = vec![*target];
                rec.controls = controls.iter().map(|c| c.0).collect();
                rec.pattern = pattern_string(controls);
                rec.param = Some(*theta);
            }
            Gate::Rz { target, theta } => {
                rec.gate = "rz".into();
                rec.qubits = vec![*target];
                rec.param = Some(*theta);
            }
            Gate::Phase { pattern, t } => {
                rec.gate = "ph".into();
                rec.qubits = pattern.iter().map(|c| c.0).collect();
                rec.pattern = pattern_string(pattern);
                rec.param = Some(*t);
            }
            Gate::Rxy { a, b, t } => {
                rec.gate = "rxy".into();
                rec.qubits = vec![*a, *b];
                rec.param = Some(*t);
            }
            Gate::PauliRot { qubits, axes, theta } => {
                rec.gate = "prot".into();
                rec.qubits = qubits.clone();
                rec.axes = axes
                    .iter()
                    .map(|a| match a {
                        PauliAxis::X => 'X',
                        PauliAxis::Y => 'Y',
                        PauliAxis::Z => 'Z',
                    })
                    .collect();
                rec.param = Some(*theta);
            }
        }
        rec
    }

    fn from_record(rec: &GateRecord) -> Result<Gate, String> {
        let controls = controls_from(&rec.controls, &rec.pattern);
        let param = || rec.param.ok_or_else(|| format!("gate {:?} needs param", rec.gate));
        let target = || {
            rec.qubits
                .first()
                .copied()
                .ok_or_else(|| format!("gate {:?} needs a target qubit", rec.gate))
        };
        match rec.gate.as_str() {
            "x" => Ok(Gate::X { controls: controls?, target: target()? }),
            "h" => Ok(Gate::H { controls: controls?, target: target()? }),
            "rx" => Ok(Gate::Rx { target: target()?, theta: param()? }),
            "ry" => Ok(Gate::Ry { controls: controls?, target: target()?, theta: param()? }),
            "rz" => Ok(Gate::Rz { target: target()?, theta: param()? }),
            "ph" => Ok(Gate::Phase {
                pattern: controls_from(&rec.qubits, &rec.pattern)?,
                t: param()?,
            }),
            "rxy" => {
                if rec.qubits.len() != 2 {
                    return Err("rxy needs exactly two qubits".into());
                }
                Ok(Gate::Rxy { a: rec.qubits[0], b: rec.qubits[1], t: param()? })
            }
            "prot" => {
                if rec.axes.len() != rec.qubits.len() {
                    return Err("prot needs one axis per qubit".into());
                }
                let axes: Option<Vec<PauliAxis>> =
                    rec.axes.chars().map(PauliAxis::from_char).collect();
                Ok(Gate::PauliRot {
                    qubits: rec.qubits.clone(),
                    axes: axes.ok_or("axes must be over X, Y, Z")?,
                    theta: param()?,
                })
            }
            other => Err(format!("unknown gate name {other:?}")),
        }
    }
}

impl Serialize for Circuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CircuitRecord {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().map(Gate::to_record).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CircuitRecord::deserialize(d)?;
        let mut circuit = Circuit::new(raw.num_qubits);
        for rec in &raw.gates {
            let gate = Gate::from_record(rec).map_err(serde::de::Error::custom)?;
            circuit.push(gate).map_err(serde::de::Error::custom)?;
        }
        Ok(circuit)
    }
}
