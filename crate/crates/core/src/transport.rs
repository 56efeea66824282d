//! Successive-shortest-path transshipment over exact rationals.
//!
//! Supplies and demands sit on the nodes of a complete graph whose edge
//! costs satisfy the triangle inequality, so every optimal transshipment can
//! be taken to ship directly from a supply node to a demand node. The problem
//! therefore reduces to a transportation problem, solved here by repeatedly
//! augmenting along a cheapest residual path (Bellman-Ford, since reverse
//! residual arcs carry negative cost).

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shipment {
    pub from: usize,
    pub to: usize,
    pub amount: Rational,
}

/// Minimum-cost plan moving `supply[i] > 0` out of and `-supply[i]` into each
/// node. `supply` must sum to zero; `cost(i, j)` is the per-unit edge cost.
pub fn min_cost_transport<F>(supply: &[Rational], cost: F) -> (Rational, Vec<Shipment>)
where
    F: Fn(usize, usize) -> Rational,
{
    debug_assert!(supply.iter().fold(rational::zero(), |a, s| a + s).is_zero());
    let sources: Vec<usize> = (0..supply.len()).filter(|&i| supply[i].is_positive()).collect();
    let sinks: Vec<usize> = (0..supply.len()).filter(|&i| supply[i].is_negative()).collect();
    if sources.is_empty() {
        return (rational::zero(), Vec::new());
    }

    // nodes: 0 = super source, 1..=S sources, S+1..=S+T sinks, S+T+1 = super sink
    let s = sources.len();
    let t = sinks.len();
    let source_node = 0;
    let sink_node = s + t + 1;
    let mut g = Residual::new(s + t + 2);
    for (a, &i) in sources.iter().enumerate() {
        g.add_arc(source_node, 1 + a, Some(supply[i].clone()), rational::zero());
    }
    let mut transport_arcs = Vec::with_capacity(s * t);
    for (a, &i) in sources.iter().enumerate() {
        for (b, &j) in sinks.iter().enumerate() {
            let id = g.add_arc(1 + a, 1 + s + b, None, cost(i, j));
            transport_arcs.push((id, i, j));
        }
    }
    for (b, &j) in sinks.iter().enumerate() {
        g.add_arc(1 + s + b, sink_node, Some(-&supply[j]), rational::zero());
    }

    while let Some(path) = g.shortest_path(source_node, sink_node) {
        let amount = path
            .iter()
            .filter_map(|&arc| g.arcs[arc].cap.clone())
            .min()
            .expect("every augmenting path crosses a capacitated arc");
        for &arc in &path {
            g.push(arc, &amount);
        }
    }

    let mut shipments = Vec::new();
    let mut total = rational::zero();
    for (id, i, j) in transport_arcs {
        let flow = &g.arcs[id].flow;
        if flow.is_positive() {
            total += flow * &g.arcs[id].cost;
            shipments.push(Shipment { from: i, to: j, amount: flow.clone() });
        }
    }
    (total, shipments)
}

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    /// Remaining capacity; `None` is unbounded.
    cap: Option<Rational>,
    cost: Rational,
    flow: Rational,
    twin: usize,
}

struct Residual {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], arcs: Vec::new() }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: Option<Rational>, cost: Rational) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost: cost.clone(), flow: rational::zero(), twin: id + 1 });
        self.arcs.push(Arc { to: from, cap: Some(rational::zero()), cost: -cost, flow: rational::zero(), twin: id });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    fn open(&self, arc: usize) -> bool {
        self.arcs[arc].cap.as_ref().is_none_or(|c| c.is_positive())
    }

    fn push(&mut self, arc: usize, amount: &Rational) {
        let twin = self.arcs[arc].twin;
        if let Some(c) = self.arcs[arc].cap.as_mut() {
            *c -= amount;
        }
        if let Some(c) = self.arcs[twin].cap.as_mut() {
            *c += amount;
        }
        // forward arcs have even ids; track net flow on them
        if arc.is_multiple_of(2) {
            self.arcs[arc].flow += amount;
        } else {
            self.arcs[twin].flow -= amount;
        }
    }

    fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut dist: Vec<Option<Rational>> = vec![None; n];
        let mut via: Vec<Option<usize>> = vec![None; n];
        dist[from] = Some(rational::zero());
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                let Some(du) = dist[u].clone() else { continue };
                for &arc in &self.adj[u] {
                    if !self.open(arc) {
                        continue;
                    }
                    let v = self.arcs[arc].to;
                    let cand = &du + &self.arcs[arc].cost;
                    if dist[v].as_ref().is_none_or(|dv| cand < *dv) {
                        dist[v] = Some(cand);
                        via[v] = Some(arc);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist[to].as_ref()?;
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let arc = via[v].expect("predecessor recorded");
            path.push(arc);
            v = self.arcs[self.arcs[arc].twin].to;
        }
        path.reverse();
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn prefers_cheap_pairing() {
        // two sources at 0 and 3, sinks at 1 and 4 on a line: match 0→1, 3→4
        let pos = [0i64, 3, 1, 4];
        let supply = vec![int(1), int(1), int(-1), int(-1)];
        let (cost, plan) = min_cost_transport(&supply, |i, j| int((pos[i] - pos[j]).abs()));
        assert_eq!(cost, int(2));
        assert_eq!(plan.len(), 2);
    }

    #[test]
    fn rerouting_via_reverse_arcs() {
        // greedy first path 1→2 must be undone to reach the optimum
        let c = [[0, 1, 1, 10], [1, 0, 1, 2], [1, 1, 0, 2], [10, 2, 2, 0]];
        let supply = vec![int(1), int(1), int(-1), int(-1)];
        let (cost, _) = min_cost_transport(&supply, |i, j| int(c[i][j]));
        // options: 0→2,1→3 = 3 ; 0→3,1→2 = 11
        assert_eq!(cost, int(3));
    }

    #[test]
    fn empty_supply() {
        let (cost, plan) = min_cost_transport(&[int(0), int(0)], |_, _| int(1));
        assert_eq!(cost, int(0));
        assert!(plan.is_empty());
    }
}
