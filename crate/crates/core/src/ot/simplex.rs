//! Primal network simplex for the dense transportation problem.
//!
//! The basis starts from the artificial "big-M" star (every source ships to
//! an artificial root, the root ships to every target), which is strongly
//! feasible. The leaving arc is chosen by the last-blocking-arc rule so the
//! tree stays strongly feasible and degenerate pivots cannot cycle. A pivot
//! re-hangs only the subtree cut off by the leaving arc: the path from the
//! entering endpoint to the cut is reversed and the subtree's potentials
//! shift by the entering arc's reduced cost.

use serde::{Deserialize, Serialize};

use super::cost::CostMatrix;
use crate::error::{Error, Result};

/// Rule selecting the entering arc among those with negative reduced cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotRule {
    /// Scan blocks of about `sqrt(arcs)` arcs cyclically and take the most
    /// negative arc of the first block containing one.
    #[default]
    BlockSearch,
    /// Full scan, most negative reduced cost.
    Dantzig,
    /// Full scan from index 0, first eligible arc.
    FirstEligible,
}

pub(crate) struct SimplexOutput {
    /// Basic real arcs `(i, j, flow)` in basis order.
    pub basic: Vec<(usize, usize, f64)>,
    /// Node potentials: sources `0..m`, targets `m..m+n`.
    pub potentials: Vec<f64>,
    pub pivots: usize,
}

struct Tree {
    parent: Vec<usize>,
    pred_slot: Vec<usize>,
    /// Arc of `pred_slot` points from the node to its parent.
    up: Vec<bool>,
    depth: Vec<usize>,
    pot: Vec<f64>,
    children: Vec<Vec<usize>>,
    /// Position of each node in its parent's `children`.
    child_pos: Vec<usize>,
    // scratch
    offsets: Vec<usize>,
    adj: Vec<usize>,
    queue: Vec<usize>,
    path: Vec<(usize, usize, bool)>,
}

struct Network<'a> {
    cost: &'a CostMatrix,
    m: usize,
    n: usize,
    art_cost: f64,
}

impl Network<'_> {
    fn root(&self) -> usize {
        self.m + self.n
    }

    fn real_arcs(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    fn tail(&self, e: usize) -> usize {
        let mn = self.real_arcs();
        if e < mn {
            e / self.n
        } else {
            let v = e - mn;
            if v < self.m {
                v
            } else {
                self.root()
            }
        }
    }

    #[inline]
    fn head(&self, e: usize) -> usize {
        let mn = self.real_arcs();
        if e < mn {
            self.m + e % self.n
        } else {
            let v = e - mn;
            if v < self.m {
                self.root()
            } else {
                v
            }
        }
    }

    #[inline]
    fn arc_cost(&self, e: usize) -> f64 {
        if e < self.real_arcs() {
            self.cost.data()[e]
        } else {
            self.art_cost
        }
    }
}

impl Tree {
    fn new(nodes: usize) -> Self {
        Tree {
            parent: vec![usize::MAX; nodes],
            pred_slot: vec![usize::MAX; nodes],
            up: vec![false; nodes],
            depth: vec![0; nodes],
            pot: vec![0.0; nodes],
            children: vec![Vec::new(); nodes],
            child_pos: vec![0; nodes],
            offsets: vec![0; nodes + 1],
            adj: Vec::new(),
            queue: Vec::with_capacity(nodes),
            path: Vec::new(),
        }
    }

    fn attach(&mut self, v: usize, p: usize) {
        self.parent[v] = p;
        self.child_pos[v] = self.children[p].len();
        self.children[p].push(v);
    }

    fn detach(&mut self, v: usize) {
        let p = self.parent[v];
        let k = self.child_pos[v];
        self.children[p].swap_remove(k);
        if let Some(&moved) = self.children[p].get(k) {
            self.child_pos[moved] = k;
        }
    }

    /// Replaces the tree arc above `out` by the arc in basis slot `slot`
    /// joining `q` (inside the subtree of `out`) to `other`. `q_up` tells
    /// whether that arc points from `q` to `other`; the subtree potentials
    /// move by `shift`.
    fn rehang(&mut self, out: usize, q: usize, other: usize, slot: usize, q_up: bool, shift: f64) {
        self.path.clear();
        let mut v = q;
        loop {
            self.path.push((v, self.pred_slot[v], self.up[v]));
            if v == out {
                break;
            }
            v = self.parent[v];
        }
        for k in 0..self.path.len() {
            self.detach(self.path[k].0);
        }
        for k in (1..self.path.len()).rev() {
            let (child, s, u) = self.path[k - 1];
            let v = self.path[k].0;
            self.attach(v, child);
            self.pred_slot[v] = s;
            self.up[v] = !u;
        }
        self.attach(q, other);
        self.pred_slot[q] = slot;
        self.up[q] = q_up;

        self.queue.clear();
        self.queue.push(q);
        self.depth[q] = self.depth[other] + 1;
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            self.pot[x] += shift;
            let d = self.depth[x] + 1;
            for c in 0..self.children[x].len() {
                let y = self.children[x][c];
                self.depth[y] = d;
                self.queue.push(y);
            }
        }
    }

    fn rebuild(&mut self, net: &Network<'_>, basis: &[usize]) {
        let nodes = self.parent.len();
        self.offsets.iter_mut().for_each(|o| *o = 0);
        for &e in basis {
            self.offsets[net.tail(e) + 1] += 1;
            self.offsets[net.head(e) + 1] += 1;
        }
        for v in 0..nodes {
            self.offsets[v + 1] += self.offsets[v];
        }
        self.adj.resize(2 * basis.len(), 0);
        let mut fill = self.offsets.clone();
        for (s, &e) in basis.iter().enumerate() {
            let (t, h) = (net.tail(e), net.head(e));
            self.adj[fill[t]] = s;
            fill[t] += 1;
            self.adj[fill[h]] = s;
            fill[h] += 1;
        }
        let root = net.root();
        self.parent.iter_mut().for_each(|p| *p = usize::MAX);
        self.children.iter_mut().for_each(Vec::clear);
        self.parent[root] = root;
        self.depth[root] = 0;
        self.pot[root] = 0.0;
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for k in self.offsets[x]..self.offsets[x + 1] {
                let s = self.adj[k];
                let e = basis[s];
                let (t, h) = (net.tail(e), net.head(e));
                let y = if t == x { h } else { t };
                if self.parent[y] != usize::MAX {
                    continue;
                }
                self.attach(y, x);
                self.pred_slot[y] = s;
                self.depth[y] = self.depth[x] + 1;
                let c = net.arc_cost(e);
                if t == y {
                    self.up[y] = true;
                    self.pot[y] = self.pot[x] + c;
                } else {
                    self.up[y] = false;
                    self.pot[y] = self.pot[x] - c;
                }
                self.queue.push(y);
            }
        }
        debug_assert_eq!(self.queue.len(), nodes, "basis is not a spanning tree");
    }
}

struct Pricer {
    rule: PivotRule,
    next: usize,
    block: usize,
    tol: f64,
}

impl Pricer {
    #[inline]
    fn reduced(net: &Network<'_>, pot: &[f64], e: usize) -> f64 {
        let (i, j) = (e / net.n, e % net.n);
        net.cost.data()[e] - pot[i] + pot[net.m + j]
    }

    fn select(&mut self, net: &Network<'_>, pot: &[f64]) -> Option<usize> {
        let arcs = net.real_arcs();
        match self.rule {
            PivotRule::Dantzig => {
                let mut best = None;
                let mut best_rc = -self.tol;
                for e in 0..arcs {
                    let rc = Self::reduced(net, pot, e);
                    if rc < best_rc {
                        best_rc = rc;
                        best = Some(e);
                    }
                }
                best
            }
            PivotRule::FirstEligible => (0..arcs).find(|&e| Self::reduced(net, pot, e) < -self.tol),
            PivotRule::BlockSearch => {
                let mut best = None;
                let mut best_rc = -self.tol;
                let mut e = self.next;
                let mut in_block = 0;
                for _ in 0..arcs {
                    let rc = Self::reduced(net, pot, e);
                    if rc < best_rc || (rc == best_rc && best.is_some_and(|b| e < b)) {
                        best_rc = rc;
                        best = Some(e);
                    }
                    e += 1;
                    if e == arcs {
                        e = 0;
                    }
                    in_block += 1;
                    if in_block == self.block {
                        if best.is_some() {
                            break;
                        }
                        in_block = 0;
                    }
                }
                self.next = e;
                best
            }
        }
    }
}

/// Solves `min Σ c_ij γ_ij` subject to row sums `supply` and column sums
/// `demand`. Both must be strictly positive.
pub(crate) fn solve(
    cost: &CostMatrix,
    supply: &[f64],
    demand: &[f64],
    rule: PivotRule,
    max_pivots: usize,
) -> Result<SimplexOutput> {
    let (m, n) = (cost.rows(), cost.cols());
    debug_assert_eq!(supply.len(), m);
    debug_assert_eq!(demand.len(), n);
    let cabs = cost.max_abs();
    let nodes = m + n + 1;
    let art_cost = if cabs > 0.0 { 2.0 * cabs * nodes as f64 } else { 1.0 };
    let net = Network {
        cost,
        m,
        n,
        art_cost,
    };
    let mn = m * n;

    let mut basis: Vec<usize> = (0..m + n).map(|v| mn + v).collect();
    let mut flow: Vec<f64> = supply.iter().chain(demand).copied().collect();

    let mut tree = Tree::new(nodes);
    tree.rebuild(&net, &basis);
    let mut pricer = Pricer {
        rule,
        next: 0,
        block: ((mn as f64).sqrt().ceil() as usize).max(10).min(mn.max(1)),
        tol: 1e-11 * cabs.max(f64::MIN_POSITIVE),
    };

    let mut pivots = 0;
    while let Some(e_in) = pricer.select(&net, &tree.pot) {
        if pivots >= max_pivots {
            return Err(Error::Solver(format!("pivot limit {max_pivots} reached")));
        }
        pivots += 1;
        let (first, second) = (net.tail(e_in), net.head(e_in));

        let (mut a, mut b) = (first, second);
        while a != b {
            if tree.depth[a] >= tree.depth[b] {
                a = tree.parent[a];
            } else {
                b = tree.parent[b];
            }
        }
        let join = a;

        let mut delta = f64::INFINITY;
        let mut out = usize::MAX;
        let mut out_on_first = true;
        let mut x = first;
        while x != join {
            if tree.up[x] {
                let d = flow[tree.pred_slot[x]];
                if d < delta {
                    delta = d;
                    out = x;
                }
            }
            x = tree.parent[x];
        }
        let mut x = second;
        while x != join {
            if !tree.up[x] {
                let d = flow[tree.pred_slot[x]];
                if d <= delta {
                    delta = d;
                    out = x;
                    out_on_first = false;
                }
            }
            x = tree.parent[x];
        }
        if out == usize::MAX {
            return Err(Error::Internal("unbounded pivot in transportation problem".into()));
        }

        if delta > 0.0 {
            let mut x = first;
            while x != join {
                let s = tree.pred_slot[x];
                flow[s] = if tree.up[x] { flow[s] - delta } else { flow[s] + delta };
                x = tree.parent[x];
            }
            let mut x = second;
            while x != join {
                let s = tree.pred_slot[x];
                flow[s] = if tree.up[x] { flow[s] + delta } else { flow[s] - delta };
                x = tree.parent[x];
            }
        }
        let slot = tree.pred_slot[out];
        basis[slot] = e_in;
        flow[slot] = delta;
        let rc = Pricer::reduced(&net, &tree.pot, e_in);
        if pivots % nodes == 0 {
            // resets potentials drift from repeated shifts
            tree.rebuild(&net, &basis);
        } else if out_on_first {
            tree.rehang(out, first, second, slot, true, rc);
        } else {
            tree.rehang(out, second, first, slot, false, -rc);
        }
    }

    tree.rebuild(&net, &basis);
    let total: f64 = supply.iter().sum();
    let leftover: f64 = basis
        .iter()
        .zip(&flow)
        .filter(|(&e, _)| e >= mn)
        .map(|(_, f)| *f)
        .sum();
    if leftover > 1e-10 * total {
        return Err(Error::Internal(format!(
            "infeasible marginals: {leftover:e} of {total:e} left on artificial arcs"
        )));
    }

    let basic = basis
        .iter()
        .zip(&flow)
        .filter(|(&e, _)| e < mn)
        .map(|(&e, &f)| (e / n, e % n, f))
        .collect();
    tree.pot.truncate(m + n);
    Ok(SimplexOutput {
        basic,
        potentials: tree.pot,
        pivots,
    })
}
