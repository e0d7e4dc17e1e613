//! Doublet tables: the two built-in presets and arbitrary custom blocks.

use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve_energy, unique_admissible, SearchConfig};
use crate::error::{Error, Result};
use crate::model::{quantum_labels, validate_problem, ProblemSpec, ShapeConvention, StateLabel, Symmetry};

/// In the pseudospin tables the κ > 0 member of a doublet is displayed with
/// `n − 1`, while both members share the NU index `n`.
pub const PSEUDOSPIN_POSITIVE_KAPPA_LABEL_OFFSET: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Table1,
    Table2,
    Fig1,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
            Preset::Fig1 => "fig1",
        }
    }

    pub fn symmetry(self) -> Option<Symmetry> {
        match self {
            Preset::Table1 => Some(Symmetry::Spin),
            Preset::Table2 => Some(Symmetry::Pseudospin),
            Preset::Fig1 => None,
        }
    }

    /// Parameter blocks (M = 1, D = 15, a = 0.1) in display order.
    pub fn blocks(self) -> Vec<Block> {
        let (symmetry, constants) = match self {
            Preset::Table1 => (Symmetry::Spin, [0.0, 5.0]),
            Preset::Table2 => (Symmetry::Pseudospin, [0.0, -5.0]),
            Preset::Fig1 => return Vec::new(),
        };
        let mut out = Vec::new();
        for constant in constants {
            for r_e in [0.8, 0.4] {
                out.push(Block {
                    symmetry,
                    mass: 1.0,
                    d: 15.0,
                    a: 0.1,
                    r_e,
                    constant,
                    convention: ShapeConvention::Tabulated,
                });
            }
        }
        out
    }

    /// Tensor strengths tabulated side by side.
    pub fn tensors(self) -> Vec<f64> {
        match self {
            Preset::Fig1 => Vec::new(),
            _ => vec![0.0, 0.5],
        }
    }

    /// `a` values of the approximation curves.
    pub fn range_values(self) -> Vec<f64> {
        match self {
            Preset::Fig1 => vec![0.1, 0.5, 1.0],
            _ => vec![0.1],
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Preset::Table1),
            "table2" => Ok(Preset::Table2),
            "fig1" => Ok(Preset::Fig1),
            other => Err(Error::Parse(format!("unknown preset '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub symmetry: Symmetry,
    pub mass: f64,
    pub d: f64,
    pub a: f64,
    pub r_e: f64,
    pub constant: f64,
    pub convention: ShapeConvention,
}

impl Block {
    pub fn problem_spec(&self, tensor: f64, n: u32, kappa: i32) -> ProblemSpec {
        ProblemSpec {
            symmetry: self.symmetry,
            mass: self.mass,
            d: self.d,
            r_e: self.r_e,
            a: self.a,
            constant: self.constant,
            tensor,
            n: n as i64,
            kappa: kappa as i64,
            convention: self.convention,
        }
    }
}

/// One doublet row: orbital index and NU index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSpec {
    /// `ℓ` for spin, `ℓ̃` for pseudospin.
    pub ell: u32,
    pub n: u32,
}

impl RowSpec {
    pub fn kappas(&self, kind: Symmetry) -> (i32, i32) {
        let l = self.ell as i32;
        match kind {
            Symmetry::Spin => (-l - 1, l),
            Symmetry::Pseudospin => (-l, l + 1),
        }
    }

    pub fn display_n(&self, kind: Symmetry) -> (u32, u32) {
        match kind {
            Symmetry::Spin => (self.n, self.n),
            Symmetry::Pseudospin => (self.n, self.n.saturating_sub(PSEUDOSPIN_POSITIVE_KAPPA_LABEL_OFFSET)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableLayout {
    pub rows: Vec<RowSpec>,
}

impl TableLayout {
    /// `ℓ = 1..=4` for the two lowest NU indices (0, 1 for spin; 1, 2 for
    /// pseudospin, whose κ > 0 member has no `n = 0` partner label).
    pub fn standard(kind: Symmetry) -> Self {
        let first = match kind {
            Symmetry::Spin => 0,
            Symmetry::Pseudospin => PSEUDOSPIN_POSITIVE_KAPPA_LABEL_OFFSET,
        };
        let rows = (first..first + 2)
            .flat_map(|n| (1..=4).map(move |ell| RowSpec { ell, n }))
            .collect();
        Self { rows }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub symmetry: Symmetry,
    pub mass: f64,
    pub d: f64,
    pub a: f64,
    pub r_e: f64,
    pub constant: f64,
    pub tensor: f64,
    pub ell: u32,
    /// NU index shared by both members.
    pub n: u32,
    pub kappa_negative: i32,
    pub label_negative: StateLabel,
    pub energy_negative: f64,
    pub kappa_positive: i32,
    pub label_positive: StateLabel,
    pub energy_positive: f64,
    /// `E(κ>0) − E(κ<0)`.
    pub splitting: f64,
}

fn solve_one(block: &Block, tensor: f64, n: u32, kappa: i32, cfg: &SearchConfig) -> Result<f64> {
    let problem = validate_problem(&block.problem_spec(tensor, n, kappa))?;
    let roots = solve_energy(&problem, cfg)?;
    Ok(unique_admissible(&roots)?.energy)
}

/// Every row of every block, one row per (block, tensor, layout row), in
/// block → tensor → layout order. Fails on the first failing row.
pub fn spectrum_table_for(
    blocks: &[Block],
    tensors: &[f64],
    layout: Option<&TableLayout>,
    cfg: &SearchConfig,
) -> Result<Vec<SpectrumRow>> {
    spectrum_rows_for(blocks, tensors, layout, cfg).into_iter().collect()
}

/// Like [`spectrum_table_for`], keeping each row's outcome; failures name
/// the row.
pub fn spectrum_rows_for(
    blocks: &[Block],
    tensors: &[f64],
    layout: Option<&TableLayout>,
    cfg: &SearchConfig,
) -> Vec<Result<SpectrumRow>> {
    let mut jobs = Vec::new();
    for block in blocks {
        let owned;
        let layout = match layout {
            Some(l) => l,
            None => {
                owned = TableLayout::standard(block.symmetry);
                &owned
            }
        };
        for &tensor in tensors {
            for row in &layout.rows {
                jobs.push((*block, tensor, *row));
            }
        }
    }

    jobs.par_iter()
        .map(|(block, tensor, row)| {
            let kind = block.symmetry;
            let (kn, kp) = row.kappas(kind);
            let (dn, dp) = row.display_n(kind);
            let annotate = |e: Error| {
                Error::Parse(format!(
                    "row {} C={} r_e={} A={} ell={} n={}: {e}",
                    kind.name(),
                    block.constant,
                    block.r_e,
                    tensor,
                    row.ell,
                    row.n
                ))
            };
            let en = solve_one(block, *tensor, row.n, kn, cfg).map_err(annotate)?;
            let ep = solve_one(block, *tensor, row.n, kp, cfg).map_err(annotate)?;
            Ok(SpectrumRow {
                symmetry: kind,
                mass: block.mass,
                d: block.d,
                a: block.a,
                r_e: block.r_e,
                constant: block.constant,
                tensor: *tensor,
                ell: row.ell,
                n: row.n,
                kappa_negative: kn,
                label_negative: quantum_labels(kn, dn)?,
                energy_negative: en,
                kappa_positive: kp,
                label_positive: quantum_labels(kp, dp)?,
                energy_positive: ep,
                splitting: ep - en,
            })
        })
        .collect()
}

pub fn spectrum_table(preset: Preset) -> Result<Vec<SpectrumRow>> {
    if preset.symmetry().is_none() {
        return Err(Error::Parse(format!(
            "preset '{}' has no spectrum table",
            preset.name()
        )));
    }
    spectrum_table_for(&preset.blocks(), &preset.tensors(), None, &SearchConfig::default())
}

/// One transcribed energy from a reference table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub symmetry: Symmetry,
    pub constant: f64,
    pub r_e: f64,
    pub tensor: f64,
    pub ell: u32,
    pub kappa: i32,
    pub n_display: u32,
    /// Label as printed; informational only.
    pub label: String,
    pub energy: f64,
}

impl ReferenceEntry {
    pub fn from_reader<R: Read>(reader: R) -> Result<Vec<Self>> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
        rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
    }

    pub fn from_path(path: &Path) -> Result<Vec<Self>> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_reader(file)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub reference: ReferenceEntry,
    pub computed: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceDiff {
    pub entries: Vec<DiffEntry>,
    pub max_abs_delta: f64,
    pub unmatched: usize,
}

fn same(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * (1.0 + x.abs())
}

/// Matches each reference entry to a computed energy by
/// (symmetry, C, r_e, A, κ, displayed n).
pub fn compare_with_reference(rows: &[SpectrumRow], reference: &[ReferenceEntry]) -> ReferenceDiff {
    let mut entries = Vec::with_capacity(reference.len());
    let mut max_abs_delta: f64 = 0.0;
    let mut unmatched = 0;
    for r in reference {
        let computed = rows.iter().find_map(|row| {
            if row.symmetry != r.symmetry
                || !same(row.constant, r.constant)
                || !same(row.r_e, r.r_e)
                || !same(row.tensor, r.tensor)
            {
                return None;
            }
            if row.kappa_negative == r.kappa && row.label_negative.n_display == r.n_display {
                Some(row.energy_negative)
            } else if row.kappa_positive == r.kappa && row.label_positive.n_display == r.n_display {
                Some(row.energy_positive)
            } else {
                None
            }
        });
        let delta = computed.map(|e| e - r.energy);
        match delta {
            Some(d) => max_abs_delta = max_abs_delta.max(d.abs()),
            None => unmatched += 1,
        }
        entries.push(DiffEntry {
            reference: r.clone(),
            computed,
            delta,
        });
    }
    ReferenceDiff {
        entries,
        max_abs_delta,
        unmatched,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts_cover_sixteen_kappas() {
        for kind in [Symmetry::Spin, Symmetry::Pseudospin] {
            let layout = TableLayout::standard(kind);
            assert_eq!(layout.rows.len(), 8);
            for row in &layout.rows {
                let (kn, kp) = row.kappas(kind);
                assert!(kn < 0 && kp > 0);
                assert_eq!(kind.centrifugal(kn), kind.centrifugal(kp));
            }
        }
    }

    #[test]
    fn pseudospin_display_labels() {
        let row = RowSpec { ell: 1, n: 1 };
        let (kn, kp) = row.kappas(Symmetry::Pseudospin);
        let (dn, dp) = row.display_n(Symmetry::Pseudospin);
        assert_eq!(quantum_labels(kn, dn).unwrap().to_string(), "1s_{1/2}");
        assert_eq!(quantum_labels(kp, dp).unwrap().to_string(), "0d_{3/2}");
    }

    #[test]
    fn first_rows_of_each_preset() {
        let rows = spectrum_table(Preset::Table1).unwrap();
        assert_eq!(rows.len(), 64);
        let first = &rows[0];
        assert_eq!(first.label_negative.to_string(), "0p_{3/2}");
        assert!((first.energy_negative - -0.994680673675).abs() < 1e-9);
        assert_eq!(first.energy_negative, first.energy_positive);

        let rows = spectrum_table(Preset::Table2).unwrap();
        let row = rows
            .iter()
            .find(|r| r.r_e == 0.4 && r.constant == 0.0 && r.tensor == 0.0 && r.ell == 1 && r.n == 1)
            .unwrap();
        assert!((row.energy_negative - 1.00642272478).abs() < 1e-9);
        assert!((row.energy_positive - 1.00642272478).abs() < 1e-9);
    }

    #[test]
    fn fig1_has_no_table() {
        assert!(spectrum_table(Preset::Fig1).is_err());
        assert_eq!("table2".parse::<Preset>().unwrap(), Preset::Table2);
        assert!("table3".parse::<Preset>().is_err());
    }

    #[test]
    fn diff_flags_unmatched_entries() {
        let csv = "symmetry,constant,r_e,tensor,ell,kappa,n_display,label,energy\n\
                   spin,0,0.8,0,1,-2,0,0p_{3/2},-0.994680673675\n\
                   spin,0,0.8,0,1,-2,7,7p_{3/2},-0.5\n";
        let reference = ReferenceEntry::from_reader(csv.as_bytes()).unwrap();
        let rows = spectrum_table_for(
            &Preset::Table1.blocks()[..1],
            &[0.0],
            Some(&TableLayout {
                rows: vec![RowSpec { ell: 1, n: 0 }],
            }),
            &SearchConfig::default(),
        )
        .unwrap();
        let diff = compare_with_reference(&rows, &reference);
        assert_eq!(diff.unmatched, 1);
        assert!(diff.max_abs_delta < 1e-9);
    }
}
