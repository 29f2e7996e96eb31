//! Coherence of lower-expectation assessments and their natural extension.
//!
//! An assessment gives lower expectations `x_j` for finitely many gambles
//! `X_j`. It is coherent iff for every distinguished `i*` and multipliers
//! `b_j ≥ 0` (`j ≠ i*`),
//!
//! ```text
//! sup_w [ Σ_{j≠i*} b_j (X_j(w) − x_j) − (X_{i*}(w) − x_{i*}) ] ≥ 0.
//! ```
//!
//! The constant gambles `0̃ ↦ 0` and `1̃ ↦ 1` are always adjoined; with them
//! the distinguished coefficient can be taken to be 1, which also covers
//! the form of the definition that allows several coefficients on the
//! distinguished gamble. On a finite space the supremum is a maximum, so
//! incoherence is the feasibility of one strict system per `i*`.

use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::atoms::{AtomSpace, Gamble};
use crate::error::{Error, Result};
use crate::linsolve::{self, Direction, LinearSystem, Optimum, Relation};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    space: Arc<AtomSpace>,
    items: Vec<(Gamble, Rational)>,
}

impl Assessment {
    pub fn new(space: &Arc<AtomSpace>, items: Vec<(Gamble, Rational)>) -> Result<Self> {
        if items.iter().any(|(g, _)| !crate::atoms::same_space(g.space(), space)) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Assessment { space: space.clone(), items })
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn items(&self) -> &[(Gamble, Rational)] {
        &self.items
    }

    /// The assessed items followed by the anchors `0̃ ↦ 0` and `1̃ ↦ 1`.
    pub fn augmented(&self) -> Vec<(Gamble, Rational)> {
        let mut out = self.items.clone();
        out.push((Gamble::constant(&self.space, Rational::zero()), Rational::zero()));
        out.push((Gamble::constant(&self.space, Rational::one()), Rational::one()));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coherence {
    Coherent,
    /// `index` is into [`Assessment::augmented`]; `multipliers` has one
    /// entry per augmented item, with `1` at `index`.
    Incoherent { index: usize, multipliers: Vec<Rational> },
}

impl Coherence {
    pub fn is_coherent(&self) -> bool {
        matches!(self, Coherence::Coherent)
    }
}

/// The strict system whose feasibility shows incoherence at `i*`.
fn incoherence_system(aug: &[(Gamble, Rational)], istar: usize) -> Result<LinearSystem> {
    let others: Vec<usize> = (0..aug.len()).filter(|&j| j != istar).collect();
    let mut sys = LinearSystem::nonnegative(others.len());
    let (xi, vi) = &aug[istar];
    for w in 0..xi.len() {
        let coeffs = others.iter().map(|&j| -(aug[j].0.value(w) - &aug[j].1)).collect();
        sys.add(coeffs, Relation::Gt, -(xi.value(w) - vi))?;
    }
    Ok(sys)
}

/// Checks coherence, returning the first distinguished index (in order)
/// that admits a sure loss together with its multipliers.
pub fn is_coherent(a: &Assessment) -> Result<Coherence> {
    let aug = a.augmented();
    let one_anchor = aug.len() - 1;
    let found = (0..one_anchor)
        .into_par_iter()
        .map(|istar| -> Result<Option<(usize, Vec<Rational>)>> {
            let sys = incoherence_system(&aug, istar)?;
            Ok(linsolve::find_feasible(&sys).map(|b| {
                let mut multipliers = b;
                multipliers.insert(istar, Rational::one());
                (istar, multipliers)
            }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();
    Ok(match found {
        None => Coherence::Coherent,
        Some((index, multipliers)) => Coherence::Incoherent { index, multipliers },
    })
}

/// `sup { α : Y − α̃ ≥ Σ_j λ_j (X_j − x_j), λ ≥ 0 }` over the augmented
/// assessment; errors if the assessment is incoherent.
pub fn natural_extension(a: &Assessment, y: &Gamble) -> Result<Rational> {
    if !crate::atoms::same_space(a.space(), y.space()) {
        return Err(Error::SpaceMismatch);
    }
    if let Coherence::Incoherent { index, .. } = is_coherent(a)? {
        return Err(Error::Incoherent { index });
    }
    let aug = a.augmented();
    let k = aug.len();
    // Variables: α (free) then λ_1..λ_k (nonnegative).
    let mut sys = LinearSystem::nonnegative(k + 1);
    sys.set_nonneg(0, false);
    for w in 0..y.len() {
        let mut coeffs = vec![-Rational::one()];
        coeffs.extend(aug.iter().map(|(x, v)| -(x.value(w) - v)));
        sys.add(coeffs, Relation::Ge, -y.value(w).clone())?;
    }
    let mut objective = vec![Rational::zero(); k + 1];
    objective[0] = Rational::one();
    match linsolve::optimize(&sys, &objective, Direction::Max)? {
        Optimum::Optimal { value, .. } => {
            let max_y = y.values().iter().max().expect("spaces are nonempty");
            if &value > max_y {
                return Err(Error::Internal("natural extension exceeds the maximum of the gamble".into()));
            }
            Ok(value)
        }
        Optimum::Unbounded => Err(Error::Internal("natural extension of a coherent assessment is unbounded".into())),
        Optimum::Infeasible(_) => Err(Error::Internal("natural-extension system is infeasible".into())),
    }
}
