//! Exhaustive reference skyline.
//!
//! Candidates are built from the definitions (event graph, then per-pair
//! counts) rather than the sweep, every pair of candidates is compared, and
//! dominance is phrased as plain Pareto dominance over criteria to maximise:
//! `(len, w_1..w_n)` for decreasing counts, `(-len, w_1..w_n)` for
//! increasing ones.

use super::{Query, Selection, SkylineTuple};
use crate::aggregate::{count_vector, CombinationUniverse};
use crate::error::Result;
use crate::graph::TemporalPropertyGraph;
use crate::ops::{event_graph, CountDirection};
use crate::time::{TimeInstant, Window};

fn criteria(t: &SkylineTuple, dir: CountDirection) -> Vec<i64> {
    let len = t.len() as i64;
    let mut v = vec![match dir {
        CountDirection::Decreasing => len,
        CountDirection::Increasing => -len,
    }];
    v.extend(t.counts.counts.iter().map(|&c| c as i64));
    v
}

/// Pareto dominance over the maximisation criteria.
pub fn pareto_dominates(a: &SkylineTuple, b: &SkylineTuple, dir: CountDirection) -> bool {
    let (x, y) = (criteria(a, dir), criteria(b, dir));
    x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| p >= q) && x != y
}

#[derive(Clone, Debug)]
pub struct BruteForce {
    /// All candidates, reference point then window length ascending.
    pub candidates: Vec<SkylineTuple>,
    /// Exact domination degree of every candidate.
    pub dod: Vec<usize>,
    /// Positions in `candidates` of the non-dominated ones.
    pub skyline: Vec<usize>,
}

impl BruteForce {
    pub fn skyline_tuples(&self) -> impl Iterator<Item = (&SkylineTuple, usize)> {
        self.skyline
            .iter()
            .map(|&i| (&self.candidates[i], self.dod[i]))
    }
}

pub fn brute_force_skyline(
    g: &TemporalPropertyGraph,
    query: &Query,
    selection: Selection,
) -> Result<BruteForce> {
    let universe = CombinationUniverse::new(g, &query.edge_label, &query.spec)?;
    let dir = query.direction();
    let mut candidates = Vec::new();
    for r in 1..g.horizon_len() as u32 {
        let reference = TimeInstant(r);
        for len in 1..=r as usize {
            let window = Window::preceding(reference, len)?;
            let ev = event_graph(
                g,
                query.kind,
                reference,
                &window.to_element(),
                query.semantics,
            )?;
            let full = SkylineTuple {
                reference,
                window,
                counts: count_vector(&ev, &universe)?,
            };
            candidates.push(match selection {
                Selection::Unified => full,
                Selection::Individual(i) => full.project(i),
            });
        }
    }
    let n = candidates.len();
    let mut dod = vec![0; n];
    let mut dominated = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && pareto_dominates(&candidates[i], &candidates[j], dir) {
                dod[i] += 1;
                dominated[j] = true;
            }
        }
    }
    let skyline = (0..n).filter(|&i| !dominated[i]).collect();
    Ok(BruteForce {
        candidates,
        dod,
        skyline,
    })
}
