//! Chain enumeration for possibility structures.
//!
//! A possibility measure is the plausibility function of a consonant mass
//! function, whose focal sets form a chain; any chain embeds in a maximal
//! one `U₁ ⊂ … ⊂ U_n`, so it suffices to try every maximal chain with
//! masses `m_k ≥ 0` on its elements and `E(γ) = Σ_k m_k·max_{U_k} γ`.
//!
//! Atoms on which every gamble of the clause agrees are interchangeable and
//! are merged into types. The system for a chain depends only on its set of
//! distinct columns (the prefix maxima), and a chain whose column set is
//! contained in another's can only be feasible if the larger one is, so
//! only maximal column sets are solved.

use std::collections::{HashMap, HashSet};

use num_traits::Signed;
use rayon::prelude::*;

use super::{solve_lp, sum_to_one, CompiledClause, DecideOptions, Trace};
use crate::atoms::WorldSet;
use crate::error::Result;
use crate::linsolve::LinearSystem;
use crate::rational::Rational;

/// A candidate chain: the order in which types are added, and the prefix
/// length realizing each distinct column.
struct Chain {
    columns: Vec<usize>,
    prefix_of_column: Vec<usize>,
    order: Vec<usize>,
}

fn column_sets(col_of: &[usize], t: usize) -> Vec<Chain> {
    let full = (1usize << t) - 1;
    let mut found: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut visited: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut order = Vec::with_capacity(t);
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        mask: usize,
        cols: Vec<usize>,
        full: usize,
        t: usize,
        col_of: &[usize],
        order: &mut Vec<usize>,
        visited: &mut HashSet<(usize, Vec<usize>)>,
        found: &mut HashMap<Vec<usize>, Vec<usize>>,
    ) {
        if mask == full {
            found.entry(cols).or_insert_with(|| order.clone());
            return;
        }
        if !visited.insert((mask, cols.clone())) {
            return;
        }
        for i in 0..t {
            if mask >> i & 1 == 1 {
                continue;
            }
            let next = mask | 1 << i;
            let mut c = cols.clone();
            if let Err(pos) = c.binary_search(&col_of[next]) {
                c.insert(pos, col_of[next]);
            }
            order.push(i);
            dfs(next, c, full, t, col_of, order, visited, found);
            order.pop();
        }
    }
    dfs(0, Vec::new(), full, t, col_of, &mut order, &mut visited, &mut found);

    let mut sets: Vec<(Vec<usize>, Vec<usize>)> = found.into_iter().collect();
    sets.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
    let mut maximal: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (cols, ord) in sets {
        let dominated = maximal.iter().any(|(big, _)| cols.iter().all(|c| big.binary_search(c).is_ok()));
        if !dominated {
            maximal.push((cols, ord));
        }
    }
    maximal
        .into_iter()
        .map(|(columns, order)| {
            let mut prefix_of_column = Vec::with_capacity(columns.len());
            for &c in &columns {
                let mut mask = 0usize;
                let k = order
                    .iter()
                    .position(|&i| {
                        mask |= 1 << i;
                        col_of[mask] == c
                    })
                    .expect("every column of a chain is one of its prefixes");
                prefix_of_column.push(k + 1);
            }
            Chain { columns, prefix_of_column, order }
        })
        .collect()
}

/// A feasible consonant mass function (focal sets of atoms, with masses),
/// or `None` when no chain admits one.
pub(super) fn clause_possibility(
    c: &CompiledClause,
    n_atoms: usize,
    opts: &DecideOptions,
    trace: &Trace,
) -> Result<Option<Vec<(WorldSet, Rational)>>> {
    let types = c.atom_types(n_atoms);
    let t = types.len();
    let k = c.gambles.len();
    // Columns are interned: col_of[mask] is the id of the prefix-max vector.
    let mut ids: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut col_of = vec![usize::MAX; 1 << t];
    for mask in 1usize..(1 << t) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let col: Vec<Rational> = if rest == 0 {
            types[low].0.clone()
        } else {
            let prev = &columns[col_of[rest]];
            (0..k).map(|g| prev[g].clone().max(types[low].0[g].clone())).collect()
        };
        let next = ids.len();
        let id = *ids.entry(col.clone()).or_insert(next);
        if id == next {
            columns.push(col);
        }
        col_of[mask] = id;
    }
    let chains = column_sets(&col_of, t);

    let try_chain = |chain: &Chain| -> Result<Option<Vec<(WorldSet, Rational)>>> {
        let v = chain.columns.len();
        let mut sys = LinearSystem::nonnegative(v);
        sum_to_one(&mut sys, 0..v)?;
        let exprs: Vec<Vec<Rational>> = (0..k).map(|g| chain.columns.iter().map(|&id| columns[id][g].clone()).collect()).collect();
        c.add_rows(&mut sys, &exprs)?;
        let Some(x) = solve_lp(&sys, opts, trace)? else { return Ok(None) };
        let mut masses = Vec::new();
        for (m, &len) in x.iter().zip(&chain.prefix_of_column) {
            if m.is_positive() {
                let set = chain.order[..len].iter().fold(WorldSet::EMPTY, |acc, &i| acc.union(types[i].1));
                masses.push((set, m.clone()));
            }
        }
        Ok(Some(masses))
    };

    if opts.dump_lp {
        for chain in &chains {
            if let Some(found) = try_chain(chain)? {
                return Ok(Some(found));
            }
        }
        return Ok(None);
    }
    chains
        .par_iter()
        .map(try_chain)
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}
