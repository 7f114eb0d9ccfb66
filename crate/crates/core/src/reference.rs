//! Published dimension tables for Γ(N) and Γ₀(N), with annotations for the
//! cells that disagree with the Eichler cohomology formula.
//!
//! Printed values are kept verbatim; an annotated cell carries both the
//! printed number and the value the formula gives.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::psl2::{Family, GroupSpec};

const TABLES_JSON: &str = include_str!("../data/reference_tables.json");
const ANNOTATIONS_JSON: &str = include_str!("../data/annotations.json");

/// One printed value of `dim ℘ₙ` (both eigenvalues together).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceCell {
    pub family: Family,
    pub level: u32,
    pub n: u32,
    pub printed: u64,
}

impl ReferenceCell {
    pub fn group(&self) -> GroupSpec {
        GroupSpec {
            family: self.family,
            level: self.level,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub family: Family,
    pub level: u32,
    pub n: u32,
    pub printed: u64,
    /// Value of the cohomology formula at this cell.
    pub expected: u64,
    pub note: String,
}

#[derive(Deserialize)]
struct TablesFile {
    cells: Vec<ReferenceCell>,
}

#[derive(Deserialize)]
struct AnnotationsFile {
    annotations: Vec<Annotation>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::ReferenceData(e.to_string()))
}

fn cells() -> &'static [ReferenceCell] {
    static CELLS: OnceLock<Vec<ReferenceCell>> = OnceLock::new();
    CELLS.get_or_init(|| {
        parse::<TablesFile>(TABLES_JSON)
            .expect("bundled reference table parses")
            .cells
    })
}

fn annotations() -> &'static [Annotation] {
    static ANN: OnceLock<Vec<Annotation>> = OnceLock::new();
    ANN.get_or_init(|| {
        parse::<AnnotationsFile>(ANNOTATIONS_JSON)
            .expect("bundled annotations parse")
            .annotations
    })
}

/// All printed cells of one family, ordered by level then degree.
pub fn reference_cells(family: Family) -> Vec<ReferenceCell> {
    let mut out: Vec<ReferenceCell> = cells().iter().copied().filter(|c| c.family == family).collect();
    out.sort_by_key(|c| (c.level, c.n));
    out
}

pub fn printed_value(group: GroupSpec, n: u32) -> Option<u64> {
    cells()
        .iter()
        .find(|c| c.group() == group && c.n == n)
        .map(|c| c.printed)
}

pub fn annotation(group: GroupSpec, n: u32) -> Option<&'static Annotation> {
    annotations()
        .iter()
        .find(|a| a.family == group.family && a.level == group.level && a.n == n)
}

pub fn all_annotations() -> &'static [Annotation] {
    annotations()
}

/// How a computed total relates to the printed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// No printed value for this cell.
    NotPrinted,
    Agrees,
    /// The printed value differs, but the cell is annotated and the computed
    /// value equals the annotated formula value.
    AnnotatedDiscrepancy(&'static Annotation),
    Disagrees { printed: u64 },
}

pub fn compare_with_printed(group: GroupSpec, n: u32, computed: u64) -> Comparison {
    let Some(printed) = printed_value(group, n) else {
        return Comparison::NotPrinted;
    };
    if printed == computed {
        return Comparison::Agrees;
    }
    match annotation(group, n) {
        Some(a) if a.expected == computed => Comparison::AnnotatedDiscrepancy(a),
        _ => Comparison::Disagrees { printed },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eichler::dim_eichler;

    #[test]
    fn cell_counts() {
        assert_eq!(reference_cells(Family::Principal).len(), 30);
        assert_eq!(reference_cells(Family::Hecke).len(), 72);
        assert_eq!(all_annotations().len(), 2);
    }

    #[test]
    fn printed_values_match_formula_except_annotated() {
        for c in cells() {
            let formula = dim_eichler(c.group(), c.n).unwrap();
            match annotation(c.group(), c.n) {
                Some(a) => {
                    assert_eq!(a.printed, c.printed);
                    assert_eq!(a.expected, formula);
                    assert_ne!(a.printed, formula);
                }
                None => assert_eq!(c.printed, formula, "{} n={}", c.group(), c.n),
            }
        }
    }

    #[test]
    fn comparisons() {
        let g7 = GroupSpec::principal(7).unwrap();
        assert!(matches!(compare_with_printed(g7, 8, 252), Comparison::AnnotatedDiscrepancy(_)));
        assert_eq!(compare_with_printed(g7, 8, 250), Comparison::Disagrees { printed: 242 });
        assert_eq!(compare_with_printed(g7, 2, 84), Comparison::Agrees);
        assert_eq!(compare_with_printed(g7, 10, 1), Comparison::NotPrinted);
    }
}
