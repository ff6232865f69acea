use serde::Serialize;

use super::E2Page;
use crate::error::{Error, Result};

/// Outcome of one hypothesis about the `d2` differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnCase {
    pub d2_trivial: bool,
    pub consistent: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeColumnVerdict {
    /// Residue dimensions of columns 0, 1, 2.
    pub columns: [usize; 3],
    pub abutment: usize,
    pub cases: Vec<ColumnCase>,
    /// Some case is consistent.
    pub consistent: bool,
    /// The consistent case forces a free module of rank one.
    pub collapse: bool,
}

impl E2Page {
    /// Total residue dimensions of every column, or `None` when some entry
    /// is not a residue vector space.
    pub fn column_dimensions(&self) -> Option<Vec<usize>> {
        (0..=self.tor.pmax).map(|p| self.tor.column_dimension(p)).collect()
    }

    pub fn three_column_analysis(&self, abutment: usize) -> Result<ThreeColumnVerdict> {
        let columns = self
            .column_dimensions()
            .ok_or_else(|| Error::Validation("page entries are not residue vector spaces".into()))?;
        three_column_analysis(&columns, abutment)
    }
}

/// Case analysis for an E2 page `κ ⊗ Q_p` with at most three columns over
/// a one-dimensional abutment. Column `p` has dimension `rank Q_p` for the
/// minimal resolution `Q` of the partner module.
///
/// `d2` maps column 2 to column 0; column 1 consists of permanent cycles.
pub fn three_column_analysis(columns: &[usize], abutment: usize) -> Result<ThreeColumnVerdict> {
    if let Some(p) = columns.iter().enumerate().skip(3).find(|(_, &c)| c > 0).map(|(p, _)| p) {
        return Err(Error::InvalidInput(format!("column {p} is nonzero; at most three columns are analysed")));
    }
    if abutment != 1 {
        return Err(Error::InvalidInput(format!("abutment of dimension {abutment}; the analysis needs dimension 1")));
    }
    let col = |p: usize| columns.get(p).copied().unwrap_or(0);
    let (c0, c1, c2) = (col(0), col(1), col(2));
    let mut cases = Vec::new();

    // d2 = 0: the page is the E-infinity page
    let total = c0 + c1 + c2;
    let trivial = if c0 == 0 {
        ColumnCase { d2_trivial: true, consistent: false, reason: "column 0 vanishes, so Q_0 = 0".into() }
    } else if total != abutment {
        ColumnCase {
            d2_trivial: true,
            consistent: false,
            reason: format!("total dimension {total} differs from the abutment dimension {abutment}"),
        }
    } else {
        ColumnCase { d2_trivial: true, consistent: true, reason: "Q_0 is free of rank one, so V is a shifted R".into() }
    };
    cases.push(trivial);

    // d2 != 0: needs nonzero columns 0 and 2
    let nontrivial = if c0 == 0 || c2 == 0 {
        ColumnCase { d2_trivial: false, consistent: false, reason: "a nonzero d2 needs columns 0 and 2".into() }
    } else if c1 == 0 {
        ColumnCase {
            d2_trivial: false,
            consistent: false,
            reason: "column 1 vanishes, so Q_1 = 0 and Q_2 -> Q_1 cannot be injective".into(),
        }
    } else if c1 > abutment {
        ColumnCase {
            d2_trivial: false,
            consistent: false,
            reason: format!("column 1 survives with dimension {c1} above the abutment"),
        }
    } else if c0 != c2 {
        ColumnCase {
            d2_trivial: false,
            consistent: false,
            reason: format!("column 1 exhausts the abutment, so d2 must be an isomorphism, but {c2} != {c0}"),
        }
    } else if c0 > 1 {
        ColumnCase {
            d2_trivial: false,
            consistent: false,
            reason: format!("R^{c0} <- R <- R^{c0} could not be a resolution"),
        }
    } else {
        ColumnCase {
            d2_trivial: false,
            consistent: false,
            reason: "R <- R <- R is given by multiplication maps, which have a non-trivial kernel".into(),
        }
    };
    cases.push(nontrivial);

    let consistent = cases.iter().any(|c| c.consistent);
    Ok(ThreeColumnVerdict { columns: [c0, c1, c2], abutment, consistent, collapse: consistent, cases })
}
