//! Minimal embedded resolution of a single cusp.
//!
//! A cusp is given by its multiplicity sequence with trailing 1's omitted.
//! Reconstruction runs in three steps:
//!
//! 1. [`proximity_structure`] extends the sequence with 1's and recovers,
//!    for every infinitely near point, the earlier points it is proximate to.
//! 2. [`resolve_cusp`] replays the blow-ups on a weighted dual graph.
//! 3. The graph is cut into stages. Stage `i` starts from a (-1)-curve and
//!    ends with a linear chain `[A_i, 1, B_i]`. The chains `A_i` run from
//!    the stage's starting curve towards the new (-1)-curve. The chains
//!    `B_i` run away from it.
//!
//! Points are indexed from 0 throughout; point `j` produces exceptional
//! curve `E_j`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::{self, LinearChain};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CuspError {
    #[error("multiplicity sequence is empty")]
    Empty,
    #[error("multiplicity {value} at position {position} is below 2 (omit trailing 1's)")]
    TooSmall { position: usize, value: u32 },
    #[error("multiplicities must be non-increasing, but {prev} is followed by {next}")]
    Increasing { prev: u32, next: u32 },
    #[error("point {point} (multiplicity {mult}) is overshot: its proximate points add up to {sum}")]
    Overshoot { point: usize, mult: u64, sum: u64 },
    #[error("point {point} would be proximate to {count} points; a unibranch point allows at most 2")]
    TooManyProximities { point: usize, count: usize },
    #[error("invalid characteristic exponents: {0}")]
    Characteristic(String),
}

/// Multiplicity sequence of one cusp, trailing 1's omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct CuspSpec {
    multiplicities: Vec<u32>,
}

impl CuspSpec {
    pub fn new(multiplicities: Vec<u32>) -> Result<Self, CuspError> {
        if multiplicities.is_empty() {
            return Err(CuspError::Empty);
        }
        if let Some((position, &value)) = multiplicities.iter().enumerate().find(|(_, &m)| m < 2) {
            return Err(CuspError::TooSmall { position, value });
        }
        if let Some(w) = multiplicities.windows(2).find(|w| w[1] > w[0]) {
            return Err(CuspError::Increasing { prev: w[0], next: w[1] });
        }
        proximity_structure(&multiplicities)?;
        Ok(CuspSpec { multiplicities })
    }

    /// Cusp with Puiseux characteristic `(n; b_1, ..., b_g)`.
    ///
    /// The multiplicities come from running Euclid's algorithm on each
    /// successive pair: every division `a = q*b + r` contributes `q` points
    /// of multiplicity `b`.
    pub fn from_characteristic(n: u32, exponents: &[u32]) -> Result<Self, CuspError> {
        let bad = |why: String| CuspError::Characteristic(why);
        if n < 2 {
            return Err(bad(format!("multiplicity {n} < 2")));
        }
        let Some(&first) = exponents.first() else {
            return Err(bad("no exponents".into()));
        };
        if first <= n {
            return Err(bad(format!("first exponent {first} must exceed {n}")));
        }
        let mut mults = Vec::new();
        let mut e = n;
        let mut prev = 0;
        for &beta in exponents {
            if beta <= prev {
                return Err(bad("exponents must increase".into()));
            }
            let next_e = num_integer::gcd(e, beta);
            if next_e == e {
                return Err(bad(format!("{beta} does not lower the gcd below {e}")));
            }
            let (mut a, mut b) = (beta - prev, e);
            while b > 0 {
                mults.extend(std::iter::repeat_n(b, (a / b) as usize));
                (a, b) = (b, a % b);
            }
            e = next_e;
            prev = beta;
        }
        if e != 1 {
            return Err(bad(format!("final gcd is {e}, the branch is reducible")));
        }
        while mults.last() == Some(&1) {
            mults.pop();
        }
        CuspSpec::new(mults)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }
}

impl TryFrom<Vec<u32>> for CuspSpec {
    type Error = CuspError;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        CuspSpec::new(v)
    }
}

impl From<CuspSpec> for Vec<u32> {
    fn from(c: CuspSpec) -> Self {
        c.multiplicities
    }
}

impl fmt::Display for CuspSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    /// The cusp itself.
    Origin,
    /// Lies on exactly one earlier exceptional curve; a sprouting blow-up.
    Free,
    /// Lies on two earlier exceptional curves; a subdivisional blow-up.
    Satellite,
}

/// Extended multiplicities plus the proximity relation between points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityStructure {
    multiplicities: Vec<u64>,
    proximate_to: Vec<Vec<usize>>,
}

impl ProximityStructure {
    /// Multiplicities including the trailing 1's.
    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    /// Earlier points that point `j` is proximate to, in increasing order.
    /// Always contains `j - 1` for `j > 0`.
    pub fn proximate_to(&self, j: usize) -> &[usize] {
        &self.proximate_to[j]
    }

    pub fn len(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    pub fn kind(&self, j: usize) -> PointKind {
        match (j, self.proximate_to[j].len()) {
            (0, _) => PointKind::Origin,
            (_, 1) => PointKind::Free,
            _ => PointKind::Satellite,
        }
    }

    /// Points proximate to `i`, i.e. those lying on the strict transform of `E_i`.
    pub fn proximate_points(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (i + 1..self.len()).filter(move |&j| self.proximate_to[j].contains(&i))
    }
}

/// Recover the unibranch proximity structure of a multiplicity sequence.
///
/// Points proximate to `i` are `i+1, i+2, ...` up to the point where their
/// multiplicities sum to `m_i`. Trailing 1's are appended only while some
/// equality is still open, so the sequence stops at the last satellite point
/// and the resolution is minimal.
pub fn proximity_structure(multiplicities: &[u32]) -> Result<ProximityStructure, CuspError> {
    let mut m: Vec<u64> = multiplicities.iter().map(|&v| v as u64).collect();
    let mut prox: Vec<Vec<usize>> = vec![Vec::new(); m.len()];
    let mut i = 0;
    while i < m.len() && (i + 1 < m.len() || m[i] > 1) {
        let mut sum = 0;
        let mut j = i + 1;
        while sum < m[i] {
            if j == m.len() {
                m.push(1);
                prox.push(Vec::new());
            }
            sum += m[j];
            prox[j].push(i);
            if prox[j].len() > 2 {
                return Err(CuspError::TooManyProximities { point: j + 1, count: prox[j].len() });
            }
            j += 1;
        }
        if sum > m[i] {
            return Err(CuspError::Overshoot { point: i + 1, mult: m[i], sum });
        }
        i += 1;
    }
    Ok(ProximityStructure { multiplicities: m, proximate_to: prox })
}

/// `Σ m(m-1)/2` over the extended sequence.
pub fn delta_invariant(spec: &CuspSpec) -> u64 {
    let prox = proximity_structure(&spec.multiplicities).expect("CuspSpec is validated on construction");
    prox.multiplicities.iter().map(|m| m * (m - 1) / 2).sum()
}

/// The resolved comb of one cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalResolution {
    spec: CuspSpec,
    proximity: ProximityStructure,
    self_intersections: Vec<i64>,
    edges: BTreeSet<(usize, usize)>,
    a_components: Vec<Vec<usize>>,
    b_components: Vec<Vec<usize>>,
    a_chains: Vec<LinearChain>,
    b_chains: Vec<LinearChain>,
    eta_per_stage: Vec<u32>,
    omega: u32,
    delta: u64,
    msum_sq: u64,
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Replay the blow-ups of a cusp and extract its comb data.
pub fn resolve_cusp(spec: &CuspSpec) -> Result<LocalResolution, CuspError> {
    let proximity = proximity_structure(&spec.multiplicities)?;
    let n = proximity.len();
    let mut self_int = Vec::with_capacity(n);
    let mut edges = BTreeSet::new();

    for j in 0..n {
        let through = proximity.proximate_to(j);
        for &c in through {
            self_int[c] -= 1;
        }
        self_int.push(-1);
        match through {
            [] => {}
            [prev] => {
                edges.insert(edge(*prev, j));
            }
            [earlier, prev] => {
                edges.remove(&edge(*earlier, *prev));
                edges.insert(edge(*earlier, j));
                edges.insert(edge(*prev, j));
            }
            _ => unreachable!("proximity_structure caps proximities at 2"),
        }
    }

    let kinds: Vec<PointKind> = (0..n).map(|j| proximity.kind(j)).collect();
    let omega = kinds.iter().filter(|k| **k != PointKind::Free).count() as u32;

    // A stage is a maximal run of free points followed by a run of satellites.
    let mut starts: Vec<usize> = (1..n)
        .filter(|&j| kinds[j] == PointKind::Free && (j == 1 || kinds[j - 1] == PointKind::Satellite))
        .collect();
    let eta_per_stage: Vec<u32> = {
        let mut bounds = starts.clone();
        bounds.push(n);
        bounds
            .windows(2)
            .map(|w| (w[0]..w[1]).filter(|&j| kinds[j] == PointKind::Free).count() as u32)
            .collect()
    };
    starts.push(n);

    let neighbours = |v: usize, allowed: &BTreeSet<usize>| -> Vec<usize> {
        edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .filter(|u| allowed.contains(u))
            .collect()
    };

    let mut a_components = Vec::new();
    let mut b_components = Vec::new();
    for w in starts.windows(2) {
        let (start, end) = (w[0], w[1]);
        let origin = start - 1;
        let minus_one = end - 1;
        let mut members: BTreeSet<usize> = (start..end).collect();
        members.insert(origin);

        let walk = |first: usize| -> Vec<usize> {
            let mut path = vec![first];
            let mut prev = minus_one;
            let mut cur = first;
            loop {
                let next: Vec<usize> = neighbours(cur, &members).into_iter().filter(|&u| u != prev).collect();
                match next.as_slice() {
                    [] => break,
                    [u] => {
                        path.push(*u);
                        prev = cur;
                        cur = *u;
                    }
                    _ => unreachable!("stage configuration is a linear chain"),
                }
            }
            path
        };

        let sides = neighbours(minus_one, &members);
        assert_eq!(sides.len(), 2, "stage (-1)-curve E{minus_one} must separate two chains");
        let (mut a_side, b_side) = {
            let p = walk(sides[0]);
            let q = walk(sides[1]);
            if p.last() == Some(&origin) {
                (p, q)
            } else {
                (q, p)
            }
        };
        debug_assert_eq!(a_side.last(), Some(&origin));
        a_side.reverse();
        a_components.push(a_side);
        b_components.push(b_side);
    }

    let to_chain = |comps: &Vec<usize>| LinearChain::new(comps.iter().map(|&c| -self_int[c]).collect());
    let a_chains = a_components.iter().map(to_chain).collect();
    let b_chains = b_components.iter().map(to_chain).collect();

    let m = proximity.multiplicities();
    let delta = m.iter().map(|m| m * (m - 1) / 2).sum();
    let msum_sq = m.iter().map(|m| m * m).sum();

    Ok(LocalResolution {
        spec: spec.clone(),
        proximity,
        self_intersections: self_int,
        edges,
        a_components,
        b_components,
        a_chains,
        b_chains,
        eta_per_stage,
        omega,
        delta,
        msum_sq,
    })
}

impl LocalResolution {
    pub fn spec(&self) -> &CuspSpec {
        &self.spec
    }

    pub fn proximity(&self) -> &ProximityStructure {
        &self.proximity
    }

    pub fn extended_multiplicities(&self) -> &[u64] {
        self.proximity.multiplicities()
    }

    /// Number of blow-ups, which is also the number of exceptional components.
    pub fn n_blowups(&self) -> usize {
        self.proximity.len()
    }

    /// Final self-intersection of each exceptional component `E_j`.
    pub fn self_intersections(&self) -> &[i64] {
        &self.self_intersections
    }

    /// Edges of the exceptional dual graph, as sorted index pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// The last exceptional curve; the only (-1)-component and the one met
    /// by the strict transform.
    pub fn d0(&self) -> usize {
        self.proximity.len() - 1
    }

    pub fn h(&self) -> usize {
        self.a_chains.len()
    }

    pub fn a_chains(&self) -> &[LinearChain] {
        &self.a_chains
    }

    pub fn b_chains(&self) -> &[LinearChain] {
        &self.b_chains
    }

    /// Component indices of `A_i`, in chain order.
    pub fn a_components(&self) -> &[Vec<usize>] {
        &self.a_components
    }

    /// Component indices of `B_i`, starting next to the stage's (-1)-curve.
    pub fn b_components(&self) -> &[Vec<usize>] {
        &self.b_components
    }

    pub fn eta_per_stage(&self) -> &[u32] {
        &self.eta_per_stage
    }

    /// Total number of sprouting blow-ups.
    pub fn eta(&self) -> u32 {
        self.eta_per_stage.iter().sum()
    }

    /// Number of subdivisional blow-ups, counting the first one.
    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn msum_sq(&self) -> u64 {
        self.msum_sq
    }

    /// Contract the exceptional graph back to a point.
    ///
    /// Returns the order in which components were contracted, or a
    /// description of the first step where the (-1)-component to contract
    /// next was not unique or not contractible.
    pub fn blow_down(&self) -> Result<Vec<usize>, String> {
        let mut weight = self.self_intersections.clone();
        let mut alive: BTreeSet<usize> = (0..weight.len()).collect();
        let mut edges = self.edges.clone();
        let mut order = Vec::with_capacity(weight.len());
        while !alive.is_empty() {
            let minus_one: Vec<usize> = alive.iter().copied().filter(|&c| weight[c] == -1).collect();
            let [c] = minus_one.as_slice() else {
                return Err(format!("expected one (-1)-component among {alive:?}, found {minus_one:?}"));
            };
            let c = *c;
            let nbrs: Vec<usize> =
                edges.iter().filter_map(|&(a, b)| if a == c { Some(b) } else if b == c { Some(a) } else { None }).collect();
            if nbrs.len() > 2 {
                return Err(format!("E{c} has {} neighbours and cannot be contracted", nbrs.len()));
            }
            for &u in &nbrs {
                weight[u] += 1;
                edges.remove(&edge(c, u));
            }
            if let [u, v] = nbrs.as_slice() {
                if !edges.insert(edge(*u, *v)) {
                    return Err(format!("contracting E{c} creates a double edge"));
                }
            }
            alive.remove(&c);
            order.push(c);
        }
        Ok(order)
    }
}

/// Check the comb relations `A_i = tw(η_i) ⋆ B_i*` and `A_i* = [B_i, η_i + 1]`
/// at every stage.
pub fn check_cres(res: &LocalResolution) -> Verdict {
    const NAME: &str = "comb_adjoint_relations";
    for (i, ((a, b), &eta)) in res.a_chains.iter().zip(&res.b_chains).zip(&res.eta_per_stage).enumerate() {
        let stage = i + 1;
        let rhs = chain::adjoint(b).and_then(|bs| chain::star(&chain::tw(eta as usize), &bs));
        match rhs {
            Ok(r) if &r == a => {}
            Ok(r) => return Verdict::fail(NAME, format!("{}: stage {stage}: A = {a} but tw({eta})*B^* = {r}", res.spec)),
            Err(e) => return Verdict::fail(NAME, format!("{}: stage {stage}: {e}", res.spec)),
        }
        match chain::adjoint(a) {
            Ok(r) if r == b.pushed(eta as i64 + 1) => {}
            Ok(r) => {
                return Verdict::fail(
                    NAME,
                    format!("{}: stage {stage}: A^* = {r} but [B, eta+1] = {}", res.spec, b.pushed(eta as i64 + 1)),
                )
            }
            Err(e) => return Verdict::fail(NAME, format!("{}: stage {stage}: {e}", res.spec)),
        }
    }
    Verdict::pass(NAME, format!("{}: {} stage(s)", res.spec, res.h()))
}
