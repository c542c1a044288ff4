use std::fmt;
use std::sync::Arc;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::mean_product;

type AtomFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// One member of an explicit, finite dictionary of weak learners.
#[derive(Clone)]
pub struct DictionaryAtom {
    pub id: usize,
    func: Arc<AtomFn>,
}

impl DictionaryAtom {
    pub fn new(id: usize, func: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            id,
            func: Arc::new(func),
        }
    }

    /// An atom defined only by its values on the rows of some dataset,
    /// looked up by the row index stored in the first feature.
    pub fn tabulated(id: usize, values: Vec<f64>) -> Self {
        Self::new(id, move |x| {
            let i = x[0] as usize;
            values.get(i).copied().unwrap_or(0.0)
        })
    }

    #[inline]
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.func)(x)
    }
}

impl fmt::Debug for DictionaryAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DictionaryAtom").field("id", &self.id).finish()
    }
}

/// Picks the atom maximizing `|<residual, g>_m|` and returns it with the
/// signed inner product. Atoms are assumed to have unit empirical norm on
/// `data`. Ties go to the lowest atom id.
pub fn select_from_dictionary(
    atoms: &[DictionaryAtom],
    data: &Dataset,
    residual: &[f64],
) -> Result<(DictionaryAtom, f64)> {
    if atoms.is_empty() {
        return Err(Error::invalid("empty dictionary"));
    }
    if residual.len() != data.len() {
        return Err(Error::Dimension {
            expected: data.len(),
            got: residual.len(),
        });
    }
    let columns: Vec<Vec<f64>> = atoms
        .iter()
        .map(|a| data.rows().map(|x| a.evaluate(x)).collect())
        .collect();
    let ids: Vec<usize> = atoms.iter().map(|a| a.id).collect();
    let (best, ip) = best_column(&columns, &ids, residual);
    Ok((atoms[best].clone(), ip))
}

/// Index of the column with the largest absolute inner product against
/// `residual`, with ties broken by the smaller id.
pub(crate) fn best_column(columns: &[Vec<f64>], ids: &[usize], residual: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut best_ip = mean_product(residual, &columns[0]);
    for (j, col) in columns.iter().enumerate().skip(1) {
        let ip = mean_product(residual, col);
        if ip.abs() > best_ip.abs() || (ip.abs() == best_ip.abs() && ids[j] < ids[best]) {
            best = j;
            best_ip = ip;
        }
    }
    (best, best_ip)
}
