use std::collections::BTreeSet;

use super::{Cycle, MultiGraph, VertexId};
use crate::error::{EpError, Result};

impl MultiGraph {
    /// All cycles of the graph, up to `cap` of them.
    ///
    /// With `edge_level = false` one cycle is reported per cyclic vertex
    /// sequence (smallest parallel edge chosen, one 2-cycle per parallel
    /// pair of vertices); with `edge_level = true` every choice of parallel
    /// edges yields its own cycle.
    pub fn cycles(&self, cap: usize, edge_level: bool) -> Result<Vec<Cycle>> {
        let mut out = Vec::new();
        let over = |n: usize| -> Result<()> {
            if n > cap {
                Err(EpError::BudgetExceeded {
                    what: "cycle enumeration",
                    limit: cap as u64,
                })
            } else {
                Ok(())
            }
        };
        // 2-cycles
        for u in self.vertices() {
            for w in self.neighbors(u) {
                if w <= u {
                    continue;
                }
                let par = self.edges_between(u, w);
                if par.len() < 2 {
                    continue;
                }
                if edge_level {
                    for i in 0..par.len() {
                        for j in i + 1..par.len() {
                            out.push(Cycle::new(vec![u, w], vec![par[i], par[j]]));
                            over(out.len())?;
                        }
                    }
                } else {
                    out.push(Cycle::new(vec![u, w], vec![par[0], par[1]]));
                    over(out.len())?;
                }
            }
        }
        // cycles of length >= 3 as vertex sequences starting at their minimum
        let verts: Vec<VertexId> = self.vertices().collect();
        for &s in &verts {
            let mut path = vec![s];
            let mut on_path = BTreeSet::from([s]);
            self.extend_paths(s, &mut path, &mut on_path, &mut |p| {
                if p[1] < *p.last().unwrap() {
                    let vs = p.to_vec();
                    let n = vs.len();
                    let choices: Vec<Vec<usize>> = (0..n)
                        .map(|i| self.edges_between(vs[i], vs[(i + 1) % n]))
                        .collect();
                    if edge_level {
                        let mut idx = vec![0usize; n];
                        loop {
                            let es = (0..n).map(|i| choices[i][idx[i]]).collect();
                            out.push(Cycle::new(vs.clone(), es));
                            over(out.len())?;
                            let mut k = 0;
                            loop {
                                if k == n {
                                    return Ok(());
                                }
                                idx[k] += 1;
                                if idx[k] < choices[k].len() {
                                    break;
                                }
                                idx[k] = 0;
                                k += 1;
                            }
                        }
                    } else {
                        let es = choices.iter().map(|c| c[0]).collect();
                        out.push(Cycle::new(vs, es));
                        over(out.len())?;
                    }
                }
                Ok(())
            })?;
        }
        Ok(out)
    }

    fn extend_paths(
        &self,
        s: VertexId,
        path: &mut Vec<VertexId>,
        on_path: &mut BTreeSet<VertexId>,
        emit: &mut dyn FnMut(&[VertexId]) -> Result<()>,
    ) -> Result<()> {
        let last = *path.last().unwrap();
        for w in self.neighbors(last) {
            if w == s && path.len() >= 3 {
                emit(path)?;
            } else if w > s && !on_path.contains(&w) {
                path.push(w);
                on_path.insert(w);
                self.extend_paths(s, path, on_path, emit)?;
                path.pop();
                on_path.remove(&w);
            }
        }
        Ok(())
    }
}
