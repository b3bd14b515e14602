//! The Newton–Puiseux tree for a Riccati operator at x = +∞.
//!
//! Each node carries the operator `R_τ(y) = R(y + partial_sum_τ)`. Its
//! children come from the edges of `N(R_τ)` with inclination below the node's
//! own `μ`: one child per nonzero irreducible factor of the edge's
//! characteristic polynomial, the root adjoined to the node's tower when the
//! factor is not linear. A node whose `g_0` vanishes has found an exact
//! solution.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numfield::{ExtensionTower, FieldElement};
use crate::polygon::{characteristic, compute_polygon, leading_term_identity_applies, Edge};
use crate::puiseux::{format_exponent, Exponent, PuiseuxPoly, TruncatedSeries};
use crate::riccati::{LinearODE, RiccatiOperator};
use crate::upoly::DEFAULT_DEPTH_CAP;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Terms with exponent below `floor` are not computed.
    pub floor: Exponent,
    /// Maximum number of terms on any branch (at least 1).
    pub max_terms: usize,
    /// Maximum depth of any extension tower.
    pub depth_cap: usize,
    /// Explore sibling subtrees on the rayon thread pool.
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            floor: Exponent::from_integer(-3),
            max_terms: 16,
            depth_cap: DEFAULT_DEPTH_CAP,
            parallel: false,
        }
    }
}

/// Inclination attached to a node: `+∞` at the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slope {
    Finite(Exponent),
    PosInfinity,
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub tower: ExtensionTower,
    /// `None` at the root.
    pub c: Option<FieldElement>,
    pub mu: Slope,
    /// Multiplicity of `c` as a root of the parent's characteristic polynomial
    /// (`n` at the root).
    pub multiplicity: usize,
    /// Degree of the factor `c` was taken from: the number of conjugate
    /// siblings this node stands for.
    pub factor_degree: usize,
    pub operator: RiccatiOperator,
    pub partial_sum: PuiseuxPoly,
    /// Every edge on the path from the root satisfies
    /// [`leading_term_identity_applies`].
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchStatus {
    Exact,
    Truncated,
}

/// A class of conjugate solutions of the Riccati equation.
#[derive(Clone, Debug)]
pub struct SolutionBranch {
    /// Node whose partial sum this branch reports.
    pub node: usize,
    pub series: TruncatedSeries,
    pub tower: ExtensionTower,
    pub status: BranchStatus,
    /// `[tower : base tower]`, the number of conjugates this branch stands for.
    pub conjugacy_degree: usize,
    pub multiplicity: usize,
    /// `deg_inf R(partial_sum)`; `None` when the residual vanishes.
    pub residual_degree: Option<Exponent>,
    pub certified: bool,
}

/// A node with no admissible edge although its operator has `g_0 ≠ 0`.
#[derive(Clone, Debug)]
pub struct DeadBranch {
    pub node: usize,
    pub multiplicity: usize,
    pub conjugacy_degree: usize,
}

#[derive(Clone, Debug)]
pub struct SolutionTree {
    pub nodes: Vec<TreeNode>,
    pub branches: Vec<SolutionBranch>,
    pub dead: Vec<DeadBranch>,
    pub base_tower: ExtensionTower,
    pub order: usize,
}

struct Subtree {
    node: TreeNode,
    children: Vec<Subtree>,
    branches: Vec<SolutionBranch>,
    dead: Option<DeadBranch>,
}

struct Ctx<'a> {
    opts: &'a SolverOptions,
    base_degree: usize,
}

impl Ctx<'_> {
    fn conjugacy(&self, tower: &ExtensionTower) -> usize {
        tower.degree_over_q() / self.base_degree
    }
}

/// Expands the Newton–Puiseux tree of the Riccati operator of `s`.
pub fn expand_tree(s: &LinearODE, opts: &SolverOptions) -> Result<SolutionTree> {
    expand_operator(&RiccatiOperator::from_linear_ode(s), opts)
}

/// Expands the tree of an arbitrary Riccati operator with nonzero top
/// coefficient.
pub fn expand_operator(r: &RiccatiOperator, opts: &SolverOptions) -> Result<SolutionTree> {
    if opts.max_terms == 0 {
        return Err(Error::Domain("max_terms must be at least 1".into()));
    }
    if r.is_degenerate() {
        return Err(Error::Domain("operator has a vanishing top coefficient".into()));
    }
    let base_tower = r.tower().clone();
    let ctx = Ctx {
        opts,
        base_degree: base_tower.degree_over_q(),
    };
    let root = TreeNode {
        id: 0,
        parent: None,
        children: Vec::new(),
        tower: base_tower.clone(),
        c: None,
        mu: Slope::PosInfinity,
        multiplicity: r.order(),
        factor_degree: 1,
        operator: r.clone(),
        partial_sum: PuiseuxPoly::zero(),
        certified: true,
    };
    let sub = explore(&ctx, root, 0)?;
    let mut tree = SolutionTree {
        nodes: Vec::new(),
        branches: Vec::new(),
        dead: Vec::new(),
        base_tower,
        order: r.order(),
    };
    flatten(sub, None, &mut tree);
    Ok(tree)
}

fn explore(ctx: &Ctx<'_>, node: TreeNode, terms: usize) -> Result<Subtree> {
    let opts = ctx.opts;
    let op = &node.operator;
    let polygon = compute_polygon(op)?;
    let g0_zero = op.coeff(0).is_zero();
    let mut branches = Vec::new();
    let mut absorbed = 0;
    if g0_zero {
        absorbed = polygon.i_min();
        branches.push(SolutionBranch {
            node: 0,
            series: TruncatedSeries::exact(node.partial_sum.clone()),
            tower: node.tower.clone(),
            status: BranchStatus::Exact,
            conjugacy_degree: ctx.conjugacy(&node.tower),
            multiplicity: absorbed,
            residual_degree: None,
            certified: node.certified,
        });
    }
    let candidates: Vec<&Edge> = polygon
        .edges
        .iter()
        .filter(|e| Slope::Finite(e.mu) < node.mu)
        .collect();
    let edge_mult = |es: &[&Edge]| es.iter().map(|e| e.upper.1 - e.lower.1).sum::<usize>();
    let residual_degree = op.coeff(0).deg_inf();
    let truncated = |floor: Exponent, multiplicity: usize| SolutionBranch {
        node: 0,
        series: TruncatedSeries::truncated(node.partial_sum.clone(), floor),
        tower: node.tower.clone(),
        status: BranchStatus::Truncated,
        conjugacy_degree: ctx.conjugacy(&node.tower),
        multiplicity,
        residual_degree,
        certified: node.certified,
    };

    let mut dead = None;
    let mut to_explore: Vec<&Edge> = Vec::new();
    if candidates.is_empty() {
        let remaining = node.multiplicity.saturating_sub(absorbed);
        if !g0_zero && remaining > 0 {
            dead = Some(DeadBranch {
                node: 0,
                multiplicity: remaining,
                conjugacy_degree: ctx.conjugacy(&node.tower),
            });
        }
    } else if terms >= opts.max_terms {
        let Slope::Finite(mu) = node.mu else {
            unreachable!("max_terms >= 1 keeps the root expandable")
        };
        branches.push(truncated(mu, edge_mult(&candidates)));
    } else {
        let (above, below): (Vec<&Edge>, Vec<&Edge>) = candidates.iter().partition(|e| e.mu >= opts.floor);
        if !below.is_empty() {
            branches.push(truncated(opts.floor, edge_mult(&below)));
        }
        to_explore = above;
    }

    let mut child_nodes = Vec::new();
    for e in to_explore {
        let h = characteristic(op, e)?.h;
        let classes = h.root_classes(&node.tower, opts.depth_cap).map_err(|e| match e {
            Error::DepthCap { cap, factor, .. } => Error::DepthCap {
                cap,
                factor,
                branch: Some(node.partial_sum.to_string()),
            },
            e => e,
        })?;
        for class in classes {
            if class.root.is_zero() {
                continue;
            }
            let operator = op.shift_substitute(&class.root, e.mu)?;
            let partial_sum = node
                .partial_sum
                .checked_add(&PuiseuxPoly::monomial(class.root.clone(), e.mu))?;
            child_nodes.push(TreeNode {
                id: 0,
                parent: None,
                children: Vec::new(),
                factor_degree: class.degree(),
                tower: class.tower,
                c: Some(class.root),
                mu: Slope::Finite(e.mu),
                multiplicity: class.multiplicity,
                operator,
                partial_sum,
                certified: node.certified && leading_term_identity_applies(op, e),
            });
        }
    }
    let children = if opts.parallel {
        child_nodes
            .into_par_iter()
            .map(|c| explore(ctx, c, terms + 1))
            .collect::<Result<Vec<_>>>()?
    } else {
        child_nodes
            .into_iter()
            .map(|c| explore(ctx, c, terms + 1))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(Subtree {
        node,
        children,
        branches,
        dead,
    })
}

fn flatten(sub: Subtree, parent: Option<usize>, tree: &mut SolutionTree) -> usize {
    let id = tree.nodes.len();
    let mut node = sub.node;
    node.id = id;
    node.parent = parent;
    tree.nodes.push(node);
    for mut b in sub.branches {
        b.node = id;
        tree.branches.push(b);
    }
    if let Some(mut d) = sub.dead {
        d.node = id;
        tree.dead.push(d);
    }
    for child in sub.children {
        let cid = flatten(child, Some(id), tree);
        tree.nodes[id].children.push(cid);
    }
    id
}

impl SolutionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    /// Node ids from the root to `id`.
    pub fn path(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Solutions accounted for by every branch, dead ones included.
    pub fn full_count(&self) -> usize {
        self.branches
            .iter()
            .map(|b| b.multiplicity * b.conjugacy_degree)
            .chain(self.dead.iter().map(|d| d.multiplicity * d.conjugacy_degree))
            .sum()
    }

    /// DOT digraph: nodes labeled `c*x^(μ) [m=…, deg=…]`, with the branches
    /// reported at each node appended.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n  node [shape=box];\n");
        for n in &self.nodes {
            let mut label = match (&n.c, n.mu) {
                (Some(c), Slope::Finite(mu)) => format!(
                    "{}*x^({}) [m={}, deg={}]",
                    c,
                    format_exponent(&mu),
                    n.multiplicity,
                    n.tower.degree_over_q()
                ),
                _ => format!("root [n={}, deg={}]", n.multiplicity, n.tower.degree_over_q()),
            };
            for b in self.branches.iter().filter(|b| b.node == n.id) {
                let status = match b.status {
                    BranchStatus::Exact => "exact".to_string(),
                    BranchStatus::Truncated => format!(
                        "truncated at {}",
                        format_exponent(&b.series.floor().expect("truncated"))
                    ),
                };
                let _ = write!(label, "\\n{status} (m={})", b.multiplicity);
            }
            if self.dead.iter().any(|d| d.node == n.id) {
                label.push_str("\\ndead");
            }
            let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, label.replace('"', "\\\""));
        }
        for n in &self.nodes {
            for c in &n.children {
                let _ = writeln!(out, "  n{} -> n{};", n.id, c);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `Σ multiplicity × conjugacy` over the first level (children of the root
/// and solutions reported at the root, which include the `i_min` zero
/// solutions). Must equal the order.
pub fn count_check(tree: &SolutionTree) -> Result<usize> {
    let root = tree.root();
    let children: usize = root
        .children
        .iter()
        .map(|&c| tree.nodes[c].multiplicity * tree.nodes[c].factor_degree)
        .sum();
    let at_root: usize = tree
        .branches
        .iter()
        .filter(|b| b.node == 0)
        .map(|b| b.multiplicity)
        .sum();
    let total = children + at_root;
    if total != tree.order {
        return Err(Error::Consistency(format!(
            "first-level count {total} differs from order {}",
            tree.order
        )));
    }
    Ok(total)
}

impl SolutionBranch {
    /// The series under every automorphism of the branch's top extension
    /// level that is realized inside its tower (the series itself first).
    pub fn conjugates_in_tower(&self, base: &ExtensionTower) -> Result<Vec<TruncatedSeries>> {
        let depth = self.tower.depth();
        if depth <= base.depth() {
            return Ok(vec![self.series.clone()]);
        }
        let minpoly = self.tower.minpoly(depth, "C");
        let theta = self.tower.generator(depth);
        let mut images = vec![theta.clone()];
        for (f, _) in minpoly.factor_over(&self.tower)? {
            if f.degree() == Some(1) {
                let rho = -&f.coeff(0);
                if rho != theta {
                    images.push(rho);
                }
            }
        }
        images
            .iter()
            .map(|rho| {
                let body = self
                    .series
                    .body()
                    .map_coefficients(|c| c.embed(&self.tower)?.substitute_top_generator(rho))?;
                Ok(match self.series.floor() {
                    None => TruncatedSeries::exact(body),
                    Some(f) => TruncatedSeries::truncated(body, f),
                })
            })
            .collect()
    }
}

/// Data certifying that two branches differ at the level of the `γ`-th
/// derivative of `R`.
#[derive(Clone, Debug)]
pub struct SeparationCertificate {
    pub gamma: usize,
    pub mu12: Exponent,
    pub xi: [FieldElement; 2],
    /// Deepest common ancestor of the two branches.
    pub witness: usize,
    /// `deg_inf(R^{(γ)}(ψ_i) − ξ_i x^{μ₁₂}) < μ₁₂`, checked by evaluation.
    pub verified: [bool; 2],
}

/// Locates where branches `b1` and `b2` (indices into `tree.branches`)
/// diverge and computes `γ = deg H − 1`, the abscissa `μ₁₂` of the edge at
/// ordinate `γ`, and `ξ_i = γ!·[C^γ] H_i`, where `H_i = H(C + c_i)` if branch
/// `i` leaves along the dividing edge and `H_i = H` otherwise.
pub fn separate(tree: &SolutionTree, b1: usize, b2: usize) -> Result<SeparationCertificate> {
    if b1 == b2 {
        return Err(Error::Domain("cannot separate a branch from itself".into()));
    }
    let (br1, br2) = (&tree.branches[b1], &tree.branches[b2]);
    if br1.node == br2.node {
        return Err(Error::Domain("branches end at the same node".into()));
    }
    let (p1, p2) = (tree.path(br1.node), tree.path(br2.node));
    let common = p1.iter().zip(&p2).take_while(|(a, b)| a == b).count();
    let tau = p1[common - 1];
    let next = [p1.get(common).copied(), p2.get(common).copied()];
    let slopes: Vec<Exponent> = next
        .iter()
        .flatten()
        .map(|&id| match tree.nodes[id].mu {
            Slope::Finite(m) => m,
            Slope::PosInfinity => unreachable!("only the root has infinite slope"),
        })
        .collect();
    let eps = *slopes.iter().max().expect("distinct nodes diverge");
    let op = &tree.nodes[tau].operator;
    let polygon = compute_polygon(op)?;
    let edge = polygon.edge_with_mu(&eps).ok_or(Error::EdgeMismatch)?;
    let h = characteristic(op, edge)?.h;
    let gamma = edge.upper.1 - 1;
    if gamma == 0 {
        return Err(Error::Domain("branches diverge on an edge of height one".into()));
    }
    let mu12 = edge.abscissa_at(gamma);
    let gamma_fact = FieldElement::from_int((1..=gamma as i64).product());
    let root_op = &tree.root().operator;
    let deriv = root_op.derivative_k(gamma);
    let mut xi = Vec::with_capacity(2);
    let mut verified = [false; 2];
    for (k, (nid, br)) in next.iter().zip([br1, br2]).enumerate() {
        let hk = match nid {
            Some(id) if tree.nodes[*id].mu == Slope::Finite(eps) => {
                h.shift(tree.nodes[*id].c.as_ref().expect("non-root"))
            }
            _ => h.clone(),
        };
        let x = &gamma_fact * &hk.coeff(gamma);
        let v = deriv.evaluate(&br.series)?;
        let diff = v.body().checked_sub(&PuiseuxPoly::monomial(x.clone(), mu12))?;
        verified[k] = diff.deg_inf().is_none_or(|d| d < mu12) && v.floor().is_none_or(|f| f <= mu12);
        xi.push(x);
    }
    let xi: [FieldElement; 2] = xi.try_into().expect("two branches");
    Ok(SeparationCertificate {
        gamma,
        mu12,
        xi,
        witness: tau,
        verified,
    })
}
