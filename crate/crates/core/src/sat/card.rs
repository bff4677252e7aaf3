//! Totalizer encoding for upper-bounding the number of true literals.

use crate::error::Result;
use crate::sat::{Cnf, Lit};

/// Unary counter over a set of input literals.
///
/// `outputs()[j]` is forced true whenever at least `j + 1` inputs are true.
/// Outputs are only built up to the limit given at construction, so
/// asserting `!outputs()[k]` enforces "at most `k` inputs true" for every
/// `k < limit`.
#[derive(Clone, Debug)]
pub struct Totalizer {
    outputs: Vec<Lit>,
}

impl Totalizer {
    pub fn build(cnf: &mut Cnf, inputs: &[Lit], limit: usize) -> Result<Self> {
        let outputs = if inputs.is_empty() || limit == 0 {
            Vec::new()
        } else {
            node(cnf, inputs, limit)?
        };
        Ok(Totalizer { outputs })
    }

    pub fn outputs(&self) -> &[Lit] {
        &self.outputs
    }

    /// Assumption literal enforcing "at most `k` inputs true", or `None` if
    /// the bound is trivially satisfied.
    pub fn at_most(&self, k: usize) -> Option<Lit> {
        self.outputs.get(k).map(|&o| !o)
    }
}

fn node(cnf: &mut Cnf, inputs: &[Lit], limit: usize) -> Result<Vec<Lit>> {
    if inputs.len() == 1 {
        return Ok(vec![inputs[0]]);
    }
    let (l, r) = inputs.split_at(inputs.len() / 2);
    let left = node(cnf, l, limit)?;
    let right = node(cnf, r, limit)?;
    let width = (left.len() + right.len()).min(limit);
    let out: Vec<Lit> = (0..width).map(|_| cnf.fresh()).collect();
    // a inputs on the left and b on the right imply at least a + b overall
    for a in 0..=left.len() {
        for b in 0..=right.len() {
            if a + b == 0 {
                continue;
            }
            let target = (a + b).min(width) - 1;
            let mut clause = Vec::with_capacity(3);
            if a > 0 {
                clause.push(!left[a - 1]);
            }
            if b > 0 {
                clause.push(!right[b - 1]);
            }
            clause.push(out[target]);
            cnf.add_clause(&clause)?;
        }
    }
    Ok(out)
}
