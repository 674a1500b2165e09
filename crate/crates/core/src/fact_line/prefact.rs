//! Prefactorization algebras on the line with a point defect at the origin.
//!
//! Intervals avoiding `0` carry the Weyl algebra (or its Poisson limit);
//! intervals containing `0` carry `Fock(L₋*) ⊗ Fock(L₊*)`, stored as one
//! polynomial whose first `dim L₋` variables belong to the left factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::fock::{FockSpace, Side};
use super::poly::{total_degree, HPoly, Poly};
use super::weyl::{weyl_mul, LagrangianSubspace, SymplecticVS, WeylElement, DEFAULT_CAP};
use crate::collapse::{preimage_open, CollapseProfile, OpenSet1D};
use crate::error::{domain, Result};

/// Which factor an interval carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Algebra,
    Defect,
}

/// How elements on either side of the defect act on the defect module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionConvention {
    /// Elements left of `0` act on `Fock(L₋*)` from the left and elements right
    /// of `0` act on `Fock(L₊*)` from the right: the boundary of `(−∞, 0]` sits
    /// to the right of it.
    Geometric,
    /// The opposite assignment of sides, kept as a counterexample.
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Quantum,
    Classical,
}

/// A value of the assignment on one interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Algebra(Poly),
    Defect(Poly),
}

impl Value {
    pub fn kind(&self) -> SpaceKind {
        match self {
            Value::Algebra(_) => SpaceKind::Algebra,
            Value::Defect(_) => SpaceKind::Defect,
        }
    }
    pub fn poly(&self) -> &Poly {
        match self {
            Value::Algebra(p) | Value::Defect(p) => p,
        }
    }
}

#[derive(Debug, Clone)]
struct DefectData {
    minus: FockSpace,
    plus: FockSpace,
}

/// The assignment with its structure maps.
#[derive(Debug, Clone)]
pub struct PrefactLine {
    v: SymplecticVS,
    defect: Option<DefectData>,
    flavor: Flavor,
    convention: ActionConvention,
    cap: u32,
    t: f64,
}

/// Result of a structure map, with the truncation flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Value,
    pub truncated: bool,
}

fn contains_zero(iv: (f64, f64)) -> bool {
    iv.0 < 0.0 && 0.0 < iv.1
}

pub fn build_defect_prefact(
    v: &SymplecticVS,
    lminus: &LagrangianSubspace,
    lplus: &LagrangianSubspace,
    t: f64,
) -> Result<PrefactLine> {
    PrefactLine::with_defect(v, lminus, lplus, t, Flavor::Quantum, ActionConvention::Geometric)
}

pub fn classical_defect_prefact(v: &SymplecticVS, lminus: &LagrangianSubspace, lplus: &LagrangianSubspace) -> Result<PrefactLine> {
    PrefactLine::with_defect(v, lminus, lplus, 0.25, Flavor::Classical, ActionConvention::Geometric)
}

impl PrefactLine {
    pub fn with_defect(
        v: &SymplecticVS,
        lminus: &LagrangianSubspace,
        lplus: &LagrangianSubspace,
        t: f64,
        flavor: Flavor,
        convention: ActionConvention,
    ) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return domain(format!("collapse parameter t = {t} outside (0, 1)"));
        }
        let minus = FockSpace::new(v, lminus)?;
        let plus = FockSpace::new(v, lplus)?;
        Ok(PrefactLine { v: v.clone(), defect: Some(DefectData { minus, plus }), flavor, convention, cap: DEFAULT_CAP, t })
    }

    /// The Weyl (or Poisson) algebra on every interval, with no defect.
    pub fn bulk(v: &SymplecticVS, flavor: Flavor) -> Self {
        PrefactLine { v: v.clone(), defect: None, flavor, convention: ActionConvention::Geometric, cap: DEFAULT_CAP, t: 0.25 }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_convention(mut self, convention: ActionConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn symplectic(&self) -> &SymplecticVS {
        &self.v
    }
    pub fn cap(&self) -> u32 {
        self.cap
    }
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
    pub fn has_defect(&self) -> bool {
        self.defect.is_some()
    }

    /// Number of variables of the defect module (left factor, right factor).
    pub fn defect_vars(&self) -> Option<(usize, usize)> {
        self.defect.as_ref().map(|d| (d.minus.nvars(), d.plus.nvars()))
    }

    pub fn fock_minus(&self) -> Option<&FockSpace> {
        self.defect.as_ref().map(|d| &d.minus)
    }
    pub fn fock_plus(&self) -> Option<&FockSpace> {
        self.defect.as_ref().map(|d| &d.plus)
    }

    pub fn kind_of(&self, iv: (f64, f64)) -> SpaceKind {
        if self.defect.is_some() && contains_zero(iv) {
            SpaceKind::Defect
        } else {
            SpaceKind::Algebra
        }
    }

    /// Kinds of the components of an open set, left to right.
    pub fn space_of(&self, u: &OpenSet1D) -> Vec<SpaceKind> {
        u.intervals().iter().map(|&iv| self.kind_of(iv)).collect()
    }

    pub fn unit(&self, iv: (f64, f64)) -> Value {
        match self.kind_of(iv) {
            SpaceKind::Algebra => Value::Algebra(Poly::one(self.v.dim())),
            SpaceKind::Defect => {
                let (a, b) = self.defect_vars().expect("defect kind implies defect data");
                Value::Defect(Poly::one(a + b))
            }
        }
    }

    fn product(&self, a: &Poly, b: &Poly) -> (Poly, bool) {
        match self.flavor {
            Flavor::Quantum => {
                let r = weyl_mul(&self.v, &WeylElement::new(a.clone()), &WeylElement::new(b.clone()), self.cap);
                (r.poly, r.truncated)
            }
            Flavor::Classical => {
                let mut p = a.mul_commutative(b);
                let t = p.truncate(self.cap);
                (p, t)
            }
        }
    }

    /// Structure map for the disjoint intervals of `inputs` inside `target`.
    /// Algebra factors multiply in spatial order; on a defect interval the
    /// products of the factors on each side act on the defect value (the
    /// vacuum if no input contains `0`).
    pub fn evaluate(&self, target: (f64, f64), inputs: &[((f64, f64), Value)]) -> Result<Evaluation> {
        let mut sorted: Vec<&((f64, f64), Value)> = inputs.iter().collect();
        sorted.sort_by(|x, y| x.0 .0.total_cmp(&y.0 .0));
        for (iv, val) in &sorted {
            if !(target.0 <= iv.0 && iv.1 <= target.1 && iv.0 < iv.1) {
                return domain(format!("input ({}, {}) not inside target ({}, {})", iv.0, iv.1, target.0, target.1));
            }
            if self.kind_of(*iv) != val.kind() {
                return domain(format!("input on ({}, {}) has the wrong kind", iv.0, iv.1));
            }
        }
        for w in sorted.windows(2) {
            if w[1].0 .0 < w[0].0 .1 {
                return domain("input intervals overlap");
            }
        }
        let n = self.v.dim();
        let mut truncated = false;
        let mut fold = |items: Vec<&Poly>| {
            let mut acc = Poly::one(n);
            for p in items {
                let (r, t) = self.product(&acc, p);
                truncated |= t;
                acc = r;
            }
            acc
        };
        match self.kind_of(target) {
            SpaceKind::Algebra => {
                let prod = fold(sorted.iter().map(|(_, v)| v.poly()).collect());
                Ok(Evaluation { value: Value::Algebra(prod), truncated })
            }
            SpaceKind::Defect => {
                let d = self.defect.as_ref().expect("defect kind implies defect data");
                let left = fold(sorted.iter().filter(|(iv, _)| iv.1 <= 0.0).map(|(_, v)| v.poly()).collect());
                let right = fold(sorted.iter().filter(|(iv, _)| iv.0 >= 0.0).map(|(_, v)| v.poly()).collect());
                let module = sorted
                    .iter()
                    .find(|(iv, _)| contains_zero(*iv))
                    .map(|(_, v)| v.poly().clone())
                    .unwrap_or_else(|| Poly::one(d.minus.nvars() + d.plus.nvars()));
                let classical = self.flavor == Flavor::Classical;
                let (left_side, right_side) = match self.convention {
                    ActionConvention::Geometric => (Side::Left, Side::Right),
                    ActionConvention::Flipped => (Side::Right, Side::Left),
                };
                let m = d.minus.act_poly(&module, &left, left_side, 0, classical);
                let mut m = d.plus.act_poly(&m, &right, right_side, d.minus.nvars(), classical);
                let (nl, cap) = (d.minus.nvars(), self.cap);
                truncated |= m.retain_exponents(|e| total_degree(&e[..nl]) <= cap && total_degree(&e[nl..]) <= cap);
                Ok(Evaluation { value: Value::Defect(m), truncated })
            }
        }
    }

    /// Structure map between open sets: each component of `target` receives
    /// the input components it contains.
    pub fn evaluate_open(&self, target: &OpenSet1D, inputs: &[(OpenSet1D, Vec<Value>)]) -> Result<(Vec<Value>, bool)> {
        let mut per: Vec<Vec<((f64, f64), Value)>> = vec![Vec::new(); target.intervals().len()];
        for (u, vals) in inputs {
            if vals.len() != u.intervals().len() {
                return domain("input must provide one value per component");
            }
            for (iv, val) in u.intervals().iter().zip(vals) {
                let slot = target
                    .intervals()
                    .iter()
                    .position(|t| t.0 <= iv.0 && iv.1 <= t.1)
                    .ok_or_else(|| crate::DefectError::Domain(format!("input ({}, {}) not inside the target", iv.0, iv.1)))?;
                per[slot].push((*iv, val.clone()));
            }
        }
        let mut out = Vec::new();
        let mut truncated = false;
        for (t, items) in target.intervals().iter().zip(per) {
            let e = self.evaluate(*t, &items)?;
            truncated |= e.truncated;
            out.push(e.value);
        }
        Ok((out, truncated))
    }

    /// Human-readable value.
    pub fn render(&self, v: &Value) -> String {
        match v {
            Value::Algebra(p) => p.display(self.v.labels()),
            Value::Defect(p) => {
                let d = self.defect.as_ref().expect("defect value implies defect data");
                let mut names: Vec<String> = d.minus.position_names().into_iter().map(|s| format!("{s}₋")).collect();
                names.extend(d.plus.position_names().into_iter().map(|s| format!("{s}₊")));
                p.display(&names)
            }
        }
    }
}

/// Nested configuration: a leaf carries an input, a node applies the structure
/// map for its children inside its interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Tree {
    Leaf((f64, f64), Value),
    Node((f64, f64), Vec<Tree>),
}

impl Tree {
    pub fn interval(&self) -> (f64, f64) {
        match self {
            Tree::Leaf(iv, _) | Tree::Node(iv, _) => *iv,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf(..) => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(Tree::depth).max().unwrap_or(0),
        }
    }

    fn leaves(&self, out: &mut Vec<((f64, f64), Value)>) {
        match self {
            Tree::Leaf(iv, v) => out.push((*iv, v.clone())),
            Tree::Node(_, ch) => ch.iter().for_each(|c| c.leaves(out)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Tree::Leaf(iv, _) => format!("({}, {})", iv.0, iv.1),
            Tree::Node(iv, ch) => {
                let inner: Vec<String> = ch.iter().map(Tree::describe).collect();
                format!("({}, {})[{}]", iv.0, iv.1, inner.join(" "))
            }
        }
    }
}

/// Composes structure maps along the tree.
pub fn evaluate_nested(p: &PrefactLine, tree: &Tree) -> Result<Evaluation> {
    match tree {
        Tree::Leaf(_, v) => Ok(Evaluation { value: v.clone(), truncated: false }),
        Tree::Node(iv, ch) => {
            let mut inputs = Vec::new();
            let mut truncated = false;
            for c in ch {
                let e = evaluate_nested(p, c)?;
                truncated |= e.truncated;
                inputs.push((c.interval(), e.value));
            }
            let e = p.evaluate(*iv, &inputs)?;
            Ok(Evaluation { value: e.value, truncated: truncated || e.truncated })
        }
    }
}

/// Applies the root structure map directly to all leaves.
pub fn evaluate_flat(p: &PrefactLine, tree: &Tree) -> Result<Evaluation> {
    let mut leaves = Vec::new();
    tree.leaves(&mut leaves);
    p.evaluate(tree.interval(), &leaves)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AxiomFailure {
    pub configuration: String,
    pub nested: String,
    pub flat: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AxiomReport {
    pub depth: usize,
    pub cap: u32,
    pub configurations: usize,
    pub max_depth_seen: usize,
    pub passed: bool,
    pub truncated: bool,
    pub first_failure: Option<AxiomFailure>,
}

/// `k` equal open pieces of `iv` separated by small gaps.
fn split(iv: (f64, f64), k: usize) -> Vec<(f64, f64)> {
    let w = (iv.1 - iv.0) / k as f64;
    let gap = w / 8.0;
    (0..k).map(|i| (iv.0 + i as f64 * w + gap, iv.0 + (i + 1) as f64 * w - gap)).collect()
}

/// Chain of nodes of the given depth, the innermost splitting in two.
fn chain(p: &PrefactLine, iv: (f64, f64), depth: usize, input: &mut dyn FnMut((f64, f64)) -> Value) -> Tree {
    if depth == 0 {
        return Tree::Leaf(iv, input(iv));
    }
    let pieces = split(iv, 2);
    let first = Tree::Leaf(pieces[0], input(pieces[0]));
    let second = chain(p, pieces[1], depth - 1, input);
    Tree::Node(iv, vec![first, second])
}

/// Deterministic family of nested configurations of depth `≤ depth` in `root`.
pub fn configurations(p: &PrefactLine, root: (f64, f64), depth: usize) -> Vec<Tree> {
    let depth = depth.clamp(1, 3);
    let n = p.v.dim();
    let mut counter = 0usize;
    let mut input = |iv: (f64, f64)| -> Value {
        counter += 1;
        match p.kind_of(iv) {
            SpaceKind::Algebra if n == 0 => Value::Algebra(Poly::one(0)),
            SpaceKind::Algebra => Value::Algebra(Poly::var(n, counter % n)),
            SpaceKind::Defect => {
                let (a, b) = p.defect_vars().expect("defect data");
                let total = a + b;
                let mut m = Poly::one(total);
                if a > 0 {
                    m = m.add(&Poly::var(total, counter % a));
                }
                if b > 0 {
                    m = m.add(&Poly::var(total, a + counter % b).scale_h(&HPoly::constant(defectwb_algebra::qi(2))));
                }
                Value::Defect(m)
            }
        }
    };
    let mut out = vec![Tree::Node(root, Vec::new())];
    for k in 1..=3 {
        let pieces = split(root, k);
        out.push(Tree::Node(root, pieces.iter().map(|&iv| Tree::Leaf(iv, input(iv))).collect()));
        if depth > 1 {
            for j in 0..k {
                for d in 1..depth {
                    let children = pieces
                        .iter()
                        .enumerate()
                        .map(|(i, &iv)| if i == j { chain(p, iv, d, &mut input) } else { Tree::Leaf(iv, input(iv)) })
                        .collect();
                    out.push(Tree::Node(root, children));
                }
            }
        }
    }
    // A node with an empty configuration inside a larger one.
    let pieces = split(root, 2);
    out.push(Tree::Node(root, vec![Tree::Node(pieces[0], Vec::new()), Tree::Leaf(pieces[1], input(pieces[1]))]));
    out
}

/// Compares nested and flat evaluation over the configuration family.
pub fn check_prefact_axioms(p: &PrefactLine, root: (f64, f64), depth: usize) -> Result<AxiomReport> {
    if depth == 0 || depth > 3 {
        return domain(format!("depth {depth} outside 1..=3"));
    }
    let trees = configurations(p, root, depth);
    let mut first_failure = None;
    let mut truncated = false;
    let mut max_depth_seen = 0;
    for tree in &trees {
        max_depth_seen = max_depth_seen.max(tree.depth());
        let nested = evaluate_nested(p, tree)?;
        let flat = evaluate_flat(p, tree)?;
        truncated |= nested.truncated || flat.truncated;
        if nested.value != flat.value && first_failure.is_none() {
            first_failure = Some(AxiomFailure {
                configuration: tree.describe(),
                nested: p.render(&nested.value),
                flat: p.render(&flat.value),
            });
        }
    }
    Ok(AxiomReport {
        depth,
        cap: p.cap,
        configurations: trees.len(),
        max_depth_seen,
        passed: first_failure.is_none() && !truncated,
        truncated,
        first_failure,
    })
}

/// `(π_t)_* P`: the value on `U` is the value of `P` on `π_t^{-1}(U)`.
#[derive(Debug, Clone)]
pub struct Pushforward<'a> {
    pub line: &'a PrefactLine,
    pub profile: CollapseProfile,
}

impl Pushforward<'_> {
    pub fn space_of(&self, u: &OpenSet1D) -> (OpenSet1D, Vec<SpaceKind>) {
        let pre = preimage_open(u, &self.profile);
        let kinds = self.line.space_of(&pre);
        (pre, kinds)
    }

    pub fn evaluate_open(&self, target: &OpenSet1D, inputs: &[(OpenSet1D, Vec<Value>)]) -> Result<(Vec<Value>, bool)> {
        let pre_target = preimage_open(target, &self.profile);
        let pre_inputs: Vec<(OpenSet1D, Vec<Value>)> =
            inputs.iter().map(|(u, v)| (preimage_open(u, &self.profile), v.clone())).collect();
        self.line.evaluate_open(&pre_target, &pre_inputs)
    }
}

/// An open set together with a configuration of opens inside it and inputs.
#[derive(Debug, Clone)]
pub struct LocalityCase {
    pub open: OpenSet1D,
    pub inputs: Vec<(OpenSet1D, Vec<Value>)>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LocalityReport {
    pub t: f64,
    pub cases: usize,
    pub spaces_equal: usize,
    pub maps_equal: usize,
    pub passed: bool,
    pub first_failure: Option<String>,
}

/// Checks that `(π_t)_*` of the defect line agrees with the defect-free line,
/// both in spaces and in structure maps, on each case.
pub fn check_locality(defect: &PrefactLine, free: &PrefactLine, profile: CollapseProfile, cases: &[LocalityCase]) -> Result<LocalityReport> {
    let push = Pushforward { line: defect, profile };
    let mut spaces_equal = 0;
    let mut maps_equal = 0;
    let mut first_failure = None;
    for (i, case) in cases.iter().enumerate() {
        let (pre, kinds) = push.space_of(&case.open);
        let same_space = pre == case.open && kinds == free.space_of(&case.open);
        if same_space {
            spaces_equal += 1;
        }
        let pushed = push.evaluate_open(&case.open, &case.inputs)?;
        let direct = free.evaluate_open(&case.open, &case.inputs)?;
        let same_map = pushed == direct && !pushed.1;
        if same_map {
            maps_equal += 1;
        }
        if (!same_space || !same_map) && first_failure.is_none() {
            first_failure = Some(format!("case {i}: open {:?}", case.open.intervals()));
        }
    }
    Ok(LocalityReport {
        t: profile.t(),
        cases: cases.len(),
        spaces_equal,
        maps_equal,
        passed: first_failure.is_none(),
        first_failure,
    })
}

/// Random open sets whose closure avoids `[−2t, 2t]`, each with up to three
/// disjoint input intervals carrying generator monomials. Endpoints lie on a
/// grid of step `1/16` in `(2t, 3)`.
pub fn sample_locality_cases(v: &SymplecticVS, t: f64, count: usize, seed: u64) -> Vec<LocalityCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = ((2.0 * t) * 16.0).floor() as i64 + 1;
    let hi = 48i64;
    let n = v.dim();
    let mut cases = Vec::new();
    while cases.len() < count {
        let mut comps: Vec<(f64, f64)> = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let a = rng.gen_range(lo..hi - 1);
            let b = rng.gen_range(a + 1..=hi);
            let (a, b) = (a as f64 / 16.0, b as f64 / 16.0);
            comps.push(if rng.gen_bool(0.5) { (a, b) } else { (-b, -a) });
        }
        let Ok(open) = OpenSet1D::new(comps) else { continue };
        let mut inputs = Vec::new();
        for &(a, b) in open.intervals() {
            let pieces = rng.gen_range(0..=2usize);
            if pieces == 0 {
                continue;
            }
            let w = (b - a) / pieces as f64;
            for i in 0..pieces {
                let iv = (a + i as f64 * w + w / 4.0, a + (i + 1) as f64 * w - w / 4.0);
                let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
                let value = Value::Algebra(Poly::term(n, e, HPoly::one()));
                inputs.push((OpenSet1D::interval(iv.0, iv.1).expect("nonempty"), vec![value]));
            }
        }
        cases.push(LocalityCase { open, inputs });
    }
    cases
}
