//! Physical parameters, potentials and quantum-number bookkeeping.
//!
//! Units are natural (ħ = c = 1): energies and inverse lengths in fm⁻¹,
//! lengths in fm. Nothing here converts units.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport};

/// How the dimensionless shape parameter `b` is derived from `a` and `r_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeConvention {
    /// `b = e^(a·r_e) − 1`: the well minimum sits at `r_e` with depth `−D`.
    #[default]
    Standard,
    /// `b = e^(2·a·r_e) + 1`: the convention behind the reference spectra
    /// shipped with the `table1`/`table2` presets. The well minimum moves to
    /// `ln(1 + b)/a`, the depth is still `−D`.
    Tabulated,
}

impl ShapeConvention {
    pub fn shape(self, a: f64, r_e: f64) -> f64 {
        match self {
            ShapeConvention::Standard => (a * r_e).exp_m1(),
            ShapeConvention::Tabulated => (2.0 * a * r_e).exp() + 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeConvention::Standard => "standard",
            ShapeConvention::Tabulated => "tabulated",
        }
    }
}

/// Shifted Deng-Fan well parameters. `b` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    d: f64,
    r_e: f64,
    a: f64,
    b: f64,
    convention: ShapeConvention,
}

impl PotentialParams {
    pub fn new(d: f64, r_e: f64, a: f64) -> Result<Self> {
        Self::with_convention(d, r_e, a, ShapeConvention::Standard)
    }

    pub fn with_convention(d: f64, r_e: f64, a: f64, convention: ShapeConvention) -> Result<Self> {
        for (name, value) in [("D", d), ("r_e", r_e), ("a", a)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        let b = convention.shape(a, r_e);
        Ok(Self {
            d,
            r_e,
            a,
            b,
            convention,
        })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn r_e(&self) -> f64 {
        self.r_e
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn convention(&self) -> ShapeConvention {
        self.convention
    }

    /// Radius of the well minimum, `ln(1 + b)/a`.
    pub fn well_minimum(&self) -> f64 {
        self.b.ln_1p() / self.a
    }

    /// `D·b·[b/(e^(ar) − 1)² − 2/(e^(ar) − 1)]`.
    ///
    /// Repulsive like `D b²/(a r)²` as `r → 0⁺` and vanishes from below as
    /// `r → ∞`.
    pub fn deng_fan(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::DomainError {
                what: "radius",
                value: r,
            });
        }
        Ok(self.deng_fan_unchecked(r))
    }

    pub(crate) fn deng_fan_unchecked(&self, r: f64) -> f64 {
        let q = (self.a * r).exp_m1();
        self.d * self.b * (self.b / (q * q) - 2.0 / q)
    }
}

/// Tensor coupling strength `A` (`A = 0` switches the tensor term off).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TensorParams {
    strength: f64,
}

impl TensorParams {
    pub fn new(strength: f64) -> Result<Self> {
        if !(strength >= 0.0) || !strength.is_finite() {
            return Err(Error::ParameterOutOfRange {
                what: "tensor strength A",
                value: strength,
            });
        }
        Ok(Self { strength })
    }

    pub fn none() -> Self {
        Self { strength: 0.0 }
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    /// Yukawa-like tensor potential `−(A/r)·e^(−a r)`, active on all `r > 0`.
    pub fn potential(&self, r: f64, a: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::DomainError {
                what: "radius",
                value: r,
            });
        }
        Ok(self.potential_unchecked(r, a))
    }

    pub(crate) fn potential_unchecked(&self, r: f64, a: f64) -> f64 {
        -self.strength / r * (-a * r).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Spin,
    Pseudospin,
}

impl Symmetry {
    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Spin => "spin",
            Symmetry::Pseudospin => "pseudospin",
        }
    }

    /// `κ(κ+1)` for spin, `κ(κ−1)` for pseudospin.
    pub fn centrifugal(self, kappa: i32) -> f64 {
        let k = kappa as f64;
        match self {
            Symmetry::Spin => k * (k + 1.0),
            Symmetry::Pseudospin => k * (k - 1.0),
        }
    }

    /// `κ + ½` for spin, `κ − ½` for pseudospin.
    pub fn shifted_kappa(self, kappa: i32) -> f64 {
        match self {
            Symmetry::Spin => kappa as f64 + 0.5,
            Symmetry::Pseudospin => kappa as f64 - 0.5,
        }
    }
}

/// Which potential is constant, and the value of that constant
/// (`C_s` for spin, `C_ps` for pseudospin).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryLimit {
    pub kind: Symmetry,
    pub constant: f64,
}

impl SymmetryLimit {
    pub fn spin(c_s: f64) -> Self {
        Self {
            kind: Symmetry::Spin,
            constant: c_s,
        }
    }

    pub fn pseudospin(c_ps: f64) -> Self {
        Self {
            kind: Symmetry::Pseudospin,
            constant: c_ps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    n: u32,
    kappa: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, kappa: i32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidKappa);
        }
        Ok(Self { n, kappa })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    /// Orbital `ℓ` of the upper component.
    pub fn orbital(&self) -> u32 {
        orbital_of(self.kappa)
    }

    /// Pseudo-orbital `ℓ̃` (orbital of the lower component).
    pub fn pseudo_orbital(&self) -> u32 {
        if self.kappa < 0 {
            (-self.kappa) as u32
        } else {
            (self.kappa - 1) as u32
        }
    }
}

fn orbital_of(kappa: i32) -> u32 {
    if kappa < 0 {
        (-kappa - 1) as u32
    } else {
        kappa as u32
    }
}

const ORBITAL_LETTERS: [char; 12] = ['s', 'p', 'd', 'f', 'g', 'h', 'i', 'k', 'l', 'm', 'n', 'o'];

/// Spectroscopic label such as `0p_{3/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateLabel {
    pub n_display: u32,
    pub letter: char,
    /// `2j`, always odd.
    pub j_numerator: u32,
}

impl StateLabel {
    pub fn orbital(&self) -> u32 {
        ORBITAL_LETTERS
            .iter()
            .position(|&c| c == self.letter)
            .expect("label letter comes from the letter table") as u32
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}_{{{}/2}}", self.n_display, self.letter, self.j_numerator)
    }
}

/// Label for `(κ, n)` using the upper-component orbital: `κ < 0 ⇒ ℓ = −κ−1,
/// j = ℓ+½`; `κ > 0 ⇒ ℓ = κ, j = ℓ−½`.
pub fn quantum_labels(kappa: i32, n: u32) -> Result<StateLabel> {
    if kappa == 0 {
        return Err(Error::InvalidKappa);
    }
    let ell = orbital_of(kappa) as usize;
    let letter = *ORBITAL_LETTERS.get(ell).ok_or(Error::ParameterOutOfRange {
        what: "orbital angular momentum",
        value: ell as f64,
    })?;
    Ok(StateLabel {
        n_display: n,
        letter,
        j_numerator: 2 * kappa.unsigned_abs() - 1,
    })
}

/// Unchecked problem definition, as supplied by a caller or the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub symmetry: Symmetry,
    pub mass: f64,
    pub d: f64,
    pub r_e: f64,
    pub a: f64,
    pub constant: f64,
    pub tensor: f64,
    pub n: i64,
    pub kappa: i64,
    pub convention: ShapeConvention,
}

/// A validated problem: every downstream operation takes one of these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub mass: f64,
    pub potential: PotentialParams,
    pub tensor: TensorParams,
    pub limit: SymmetryLimit,
    pub quantum: QuantumNumbers,
}

impl Problem {
    pub fn symmetry(&self) -> Symmetry {
        self.limit.kind
    }

    pub fn n(&self) -> u32 {
        self.quantum.n()
    }

    pub fn kappa(&self) -> i32 {
        self.quantum.kappa()
    }

    pub fn with_quantum(&self, n: u32, kappa: i32) -> Result<Self> {
        Ok(Self {
            quantum: QuantumNumbers::new(n, kappa)?,
            ..*self
        })
    }

    pub fn with_tensor(&self, strength: f64) -> Result<Self> {
        Ok(Self {
            tensor: TensorParams::new(strength)?,
            ..*self
        })
    }

    pub fn to_spec(&self) -> ProblemSpec {
        ProblemSpec {
            symmetry: self.limit.kind,
            mass: self.mass,
            d: self.potential.d(),
            r_e: self.potential.r_e(),
            a: self.potential.a(),
            constant: self.limit.constant,
            tensor: self.tensor.strength(),
            n: self.n() as i64,
            kappa: self.kappa() as i64,
            convention: self.potential.convention(),
        }
    }
}

/// Checks every constraint on `spec` and reports all violations at once.
pub fn validate_problem(spec: &ProblemSpec) -> Result<Problem> {
    let mut report = ValidationReport::default();

    for (name, value) in [("mass", spec.mass), ("constant", spec.constant)] {
        if !value.is_finite() {
            report.push(Error::DomainError { what: name, value });
        }
    }
    if spec.mass.is_finite() && spec.mass <= 0.0 {
        report.push(Error::NonPositiveParameter {
            name: "mass",
            value: spec.mass,
        });
    }
    for (name, value) in [("D", spec.d), ("r_e", spec.r_e), ("a", spec.a)] {
        if !(value > 0.0) || !value.is_finite() {
            report.push(Error::NonPositiveParameter { name, value });
        }
    }
    if !(spec.tensor >= 0.0) || !spec.tensor.is_finite() {
        report.push(Error::ParameterOutOfRange {
            what: "tensor strength A",
            value: spec.tensor,
        });
    }
    if spec.kappa == 0 {
        report.push(Error::InvalidKappa);
    } else if spec.kappa.unsigned_abs() > i32::MAX as u64 {
        report.push(Error::ParameterOutOfRange {
            what: "kappa",
            value: spec.kappa as f64,
        });
    }
    if spec.n < 0 || spec.n > u32::MAX as i64 {
        report.push(Error::ParameterOutOfRange {
            what: "n",
            value: spec.n as f64,
        });
    }

    if !report.is_empty() {
        return Err(Error::Validation(report));
    }

    Ok(Problem {
        mass: spec.mass,
        potential: PotentialParams::with_convention(spec.d, spec.r_e, spec.a, spec.convention)?,
        tensor: TensorParams::new(spec.tensor)?,
        limit: SymmetryLimit {
            kind: spec.symmetry,
            constant: spec.constant,
        },
        quantum: QuantumNumbers::new(spec.n as u32, spec.kappa as i32)?,
    })
}
