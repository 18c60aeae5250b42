//! Picard lattice of the plane blown up at the cusps' infinitely near points.
//!
//! The lattice has basis `L, E_1, ..., E_N` (line class and total transforms
//! of the exceptional curves) with pairing `diag(1, -1, ..., -1)`. Every
//! component of the boundary divisor `D` (the strict transform `C'` plus
//! the strict transforms of all exceptional curves) gets an integer class.
//! Twigs, barks and the Zariski decomposition of `K + D` are computed from
//! those classes alone, so they form an independent path from the
//! resolution bookkeeping in [`crate::cusp`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cusp::LocalResolution;
use crate::linalg;
use crate::rational::Q;
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("curve of degree {degree} with total delta {delta} has genus {genus}, not 0")]
    Genus { degree: u32, delta: u64, genus: i64 },
    #[error("lattice dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("boundary divisor is not an SNC tree: {0}")]
    NotSncTree(String),
    #[error("twig {0} is not contractible")]
    NonContractibleTwig(String),
    #[error("K+D is not pseudo-effective relative to D: intersection form on {{{0}}} is not negative definite")]
    NotPseudoEffective(String),
    #[error("matrix must be square and symmetric")]
    NotSymmetric,
}

/// An integer class in the lattice basis `(L, E_1, ..., E_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class(Vec<i64>);

impl Class {
    pub fn new(coords: Vec<i64>) -> Self {
        Class(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Class(vec![0; dim])
    }

    /// Basis vector `e_i`; index 0 is the line class.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Class(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn plus(&self, other: &Class) -> Class {
        Class(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// The signature `(1, N)` form.
pub fn pair(a: &Class, b: &Class) -> Result<i64, LatticeError> {
    if a.dim() != b.dim() {
        return Err(LatticeError::Dimension(a.dim(), b.dim()));
    }
    Ok(pair_unchecked(&a.0, &b.0))
}

fn pair_unchecked(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

fn pair_rational(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let mut acc = &a[0] * &b[0];
    for (x, y) in a[1..].iter().zip(&b[1..]) {
        acc -= x * y;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// The strict transform `C'` of the curve.
    StrictTransform,
    /// Strict transform of the exceptional curve of blow-up `point` over cusp `cusp`.
    Exceptional { cusp: usize, point: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    pub kind: ComponentKind,
    pub class: Class,
}

/// The blown-up plane together with the reduced boundary divisor `D`.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    degree: u32,
    n_blowups: usize,
    components: Vec<Component>,
    canonical: Class,
    gram: Vec<Vec<i64>>,
    neighbours: Vec<Vec<usize>>,
}

/// Assemble the lattice model of a degree-`degree` curve whose cusps resolve
/// as `resolutions`. Rejects curves of non-zero geometric genus.
pub fn build_surface(degree: u32, resolutions: &[LocalResolution]) -> Result<SurfaceModel, LatticeError> {
    let d = degree as i64;
    let delta: u64 = resolutions.iter().map(|r| r.delta()).sum();
    let genus = (d - 1) * (d - 2) / 2 - delta as i64;
    if genus != 0 {
        return Err(LatticeError::Genus { degree, delta, genus });
    }

    let n: usize = resolutions.iter().map(|r| r.n_blowups()).sum();
    let dim = n + 1;

    let mut c_prime = vec![0; dim];
    c_prime[0] = d;
    let mut components = Vec::with_capacity(dim);
    let mut offset = 1;
    let mut exceptional = Vec::with_capacity(n);
    for (k, res) in resolutions.iter().enumerate() {
        let prox = res.proximity();
        for j in 0..res.n_blowups() {
            c_prime[offset + j] = -(prox.multiplicities()[j] as i64);
            let mut class = vec![0; dim];
            class[offset + j] = 1;
            for p in prox.proximate_points(j) {
                class[offset + p] -= 1;
            }
            exceptional.push(Component {
                label: format!("P{}:E{}", k + 1, j + 1),
                kind: ComponentKind::Exceptional { cusp: k, point: j },
                class: Class(class),
            });
        }
        offset += res.n_blowups();
    }
    components.push(Component { label: "C'".into(), kind: ComponentKind::StrictTransform, class: Class(c_prime) });
    components.extend(exceptional);

    let mut canonical = vec![1; dim];
    canonical[0] = -3;
    SurfaceModel::from_components(degree, n, components, Class(canonical))
}

impl SurfaceModel {
    /// Model from explicit classes on the plane blown up `n_blowups` times.
    ///
    /// The components must pairwise meet at most once transversally and the
    /// dual graph must be a tree.
    pub fn from_components(
        degree: u32,
        n_blowups: usize,
        components: Vec<Component>,
        canonical: Class,
    ) -> Result<Self, LatticeError> {
        let dim = n_blowups + 1;
        if let Some(c) = components.iter().find(|c| c.class.dim() != dim) {
            return Err(LatticeError::Dimension(c.class.dim(), dim));
        }
        if canonical.dim() != dim {
            return Err(LatticeError::Dimension(canonical.dim(), dim));
        }
        let r = components.len();
        let gram: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| pair_unchecked(&components[i].class.0, &components[j].class.0)).collect())
            .collect();
        let mut neighbours = vec![Vec::new(); r];
        let mut n_edges = 0;
        for i in 0..r {
            for j in i + 1..r {
                match gram[i][j] {
                    0 => {}
                    1 => {
                        neighbours[i].push(j);
                        neighbours[j].push(i);
                        n_edges += 1;
                    }
                    v => {
                        return Err(LatticeError::NotSncTree(format!(
                            "{} and {} meet with multiplicity {v}",
                            components[i].label, components[j].label
                        )))
                    }
                }
            }
        }
        let model = SurfaceModel { degree, n_blowups, components, canonical, gram, neighbours };
        if r > 0 && (n_edges != r - 1 || !model.is_connected()) {
            return Err(LatticeError::NotSncTree(format!("{r} components, {n_edges} edges")));
        }
        Ok(model)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.components.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &self.neighbours[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n_blowups(&self) -> usize {
        self.n_blowups
    }

    /// Rank of the lattice, `1 + N`.
    pub fn rank(&self) -> usize {
        self.n_blowups + 1
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn label(&self, i: usize) -> &str {
        &self.components[i].label
    }

    pub fn canonical(&self) -> &Class {
        &self.canonical
    }

    pub fn pair(&self, a: &Class, b: &Class) -> Result<i64, LatticeError> {
        pair(a, b)
    }

    /// Intersection number of components `i` and `j` of `D`.
    pub fn intersection(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    pub fn self_intersection(&self, i: usize) -> i64 {
        self.gram[i][i]
    }

    pub fn neighbours(&self, i: usize) -> &[usize] {
        &self.neighbours[i]
    }

    /// `(D - E) E`, the number of other components meeting `E`.
    pub fn valence(&self, i: usize) -> usize {
        self.neighbours[i].len()
    }

    /// Index of the component with the given kind.
    pub fn index_of(&self, kind: ComponentKind) -> Option<usize> {
        self.components.iter().position(|c| c.kind == kind)
    }

    /// The reduced divisor `D` as a class.
    pub fn d_class(&self) -> Class {
        self.components.iter().fold(Class::zero(self.rank()), |acc, c| acc.plus(&c.class))
    }

    pub fn k_dot(&self, i: usize) -> i64 {
        pair_unchecked(&self.canonical.0, &self.components[i].class.0)
    }

    /// `(K + D) E_i`.
    pub fn kd_dot(&self, i: usize) -> i64 {
        self.k_dot(i) + self.gram[i].iter().sum::<i64>()
    }

    pub fn c_prime_sq(&self) -> i64 {
        self.index_of(ComponentKind::StrictTransform).map_or(0, |i| self.gram[i][i])
    }

    pub fn d_squared(&self) -> i64 {
        self.gram.iter().flatten().sum()
    }

    /// `K (K + D)`.
    pub fn kkd(&self) -> i64 {
        let kd = self.canonical.plus(&self.d_class());
        pair_unchecked(&self.canonical.0, &kd.0)
    }

    /// `D (K + D)`.
    pub fn d_dot_kd(&self) -> i64 {
        let d = self.d_class();
        pair_unchecked(&d.0, &self.canonical.plus(&d).0)
    }

    /// `(K + D)^2`.
    pub fn kd_squared(&self) -> i64 {
        let kd = self.canonical.plus(&self.d_class());
        pair_unchecked(&kd.0, &kd.0)
    }

    fn gram_of(&self, support: &[usize]) -> Vec<Vec<BigInt>> {
        support.iter().map(|&i| support.iter().map(|&j| BigInt::from(self.gram[i][j])).collect()).collect()
    }

    fn labels_of(&self, comps: &[usize]) -> String {
        comps.iter().map(|&i| self.label(i)).collect::<Vec<_>>().join(", ")
    }

    /// Solve `X E = (K + D) E` for `X` supported on `support`.
    fn solve_on(&self, support: &[usize]) -> Option<QDivisor> {
        let rhs: Vec<BigInt> = support.iter().map(|&i| BigInt::from(self.kd_dot(i))).collect();
        let x = linalg::solve(&self.gram_of(support), &rhs)?;
        Some(QDivisor::from_pairs(support.iter().copied().zip(x)))
    }

    fn contractible(&self, support: &[usize]) -> bool {
        linalg::is_negative_definite_int(&self.gram_of(support))
    }
}

/// A rational divisor supported on components of `D`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QDivisor {
    coefficients: BTreeMap<usize, BigRational>,
}

impl QDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, BigRational)>) -> Self {
        let mut d = QDivisor::zero();
        for (i, c) in pairs {
            d.add(i, &c);
        }
        d
    }

    fn add(&mut self, i: usize, c: &BigRational) {
        let slot = self.coefficients.entry(i).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coefficients.remove(&i);
        }
    }

    pub fn plus(&self, other: &QDivisor) -> QDivisor {
        let mut out = self.clone();
        for (&i, c) in &other.coefficients {
            out.add(i, c);
        }
        out
    }

    pub fn coefficient(&self, i: usize) -> BigRational {
        self.coefficients.get(&i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, BigRational> {
        &self.coefficients
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coefficients.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `⌊X⌋`, componentwise; zero coefficients are dropped.
    pub fn floor(&self) -> BTreeMap<usize, BigInt> {
        self.coefficients
            .iter()
            .map(|(&i, c)| (i, c.floor().to_integer()))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// `X E_i`.
    pub fn dot(&self, model: &SurfaceModel, i: usize) -> BigRational {
        self.coefficients
            .iter()
            .map(|(&j, c)| c * BigRational::from_integer(model.intersection(i, j).into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn square(&self, model: &SurfaceModel) -> BigRational {
        self.coefficients.iter().map(|(&i, c)| c * self.dot(model, i)).fold(BigRational::zero(), |a, b| a + b)
    }

    /// Coordinates in the lattice basis.
    pub fn to_class(&self, model: &SurfaceModel) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); model.rank()];
        for (&i, c) in &self.coefficients {
            for (slot, &x) in v.iter_mut().zip(model.components[i].class.coords()) {
                *slot += c * BigRational::from_integer(x.into());
            }
        }
        v
    }

    /// Coefficients keyed by component label, for serialization.
    pub fn labelled(&self, model: &SurfaceModel) -> BTreeMap<String, Q> {
        self.coefficients.iter().map(|(&i, c)| (model.label(i).to_string(), Q(c.clone()))).collect()
    }
}

/// A maximal twig, listed from its tip inwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twig {
    pub components: Vec<usize>,
    /// All components have self-intersection below -1.
    pub admissible: bool,
}

impl Twig {
    /// The twig as a chain of negated self-intersections, tip first.
    pub fn weights(&self, model: &SurfaceModel) -> Vec<i64> {
        self.components.iter().map(|&i| -model.self_intersection(i)).collect()
    }
}

/// All maximal rational twigs of `D`.
///
/// A twig is grown from each tip through valence-2 components and must end
/// next to a branching component. When the walk reaches another tip instead,
/// `D` is a linear rod and has no maximal twigs.
pub fn maximal_twigs(model: &SurfaceModel) -> Vec<Twig> {
    let mut twigs = Vec::new();
    for tip in (0..model.components.len()).filter(|&i| model.valence(i) == 1) {
        let mut path = vec![tip];
        let mut prev = tip;
        let mut cur = model.neighbours(tip)[0];
        loop {
            match model.valence(cur) {
                1 => break,
                2 => {
                    path.push(cur);
                    let next = model.neighbours(cur).iter().copied().find(|&u| u != prev).expect("valence 2");
                    prev = cur;
                    cur = next;
                }
                _ => {
                    let admissible = path.iter().all(|&i| model.self_intersection(i) < -1);
                    twigs.push(Twig { components: path, admissible });
                    break;
                }
            }
        }
    }
    twigs
}

/// `D` is a rod: its dual graph is linear.
pub fn is_rod(model: &SurfaceModel) -> bool {
    (0..model.components.len()).all(|i| model.valence(i) <= 2)
}

/// `D` is a rational fork: one component of valence 3 carrying three
/// contractible maximal twigs, with `(K + D - Σ Bk(T)) C < 0` on the centre.
pub fn is_rational_fork(model: &SurfaceModel) -> bool {
    let branching: Vec<usize> = (0..model.components.len()).filter(|&i| model.valence(i) > 2).collect();
    let [centre] = branching.as_slice() else {
        return false;
    };
    if model.valence(*centre) != 3 {
        return false;
    }
    let twigs = maximal_twigs(model);
    if twigs.len() != 3 || twigs.iter().any(|t| !model.contractible(&t.components)) {
        return false;
    }
    let barks = twigs.iter().filter_map(|t| model.solve_on(&t.components)).fold(QDivisor::zero(), |a, b| a.plus(&b));
    BigRational::from_integer(model.kd_dot(*centre).into()) - barks.dot(model, *centre) < BigRational::zero()
}

/// `Bk(D)`: sum of the barks of the maximal twigs, or the bark of `D` itself
/// when `D` is a contractible rod or rational fork.
pub fn bark(model: &SurfaceModel) -> Result<QDivisor, LatticeError> {
    let all: Vec<usize> = (0..model.components.len()).collect();
    if (is_rod(model) || is_rational_fork(model)) && model.contractible(&all) {
        return model.solve_on(&all).ok_or_else(|| LatticeError::NonContractibleTwig(model.labels_of(&all)));
    }
    let mut total = QDivisor::zero();
    for twig in maximal_twigs(model) {
        let bk = if model.contractible(&twig.components) { model.solve_on(&twig.components) } else { None };
        match bk {
            Some(bk) => total = total.plus(&bk),
            None => return Err(LatticeError::NonContractibleTwig(model.labels_of(&twig.components))),
        }
    }
    Ok(total)
}

/// `K + D = H + N`, restricted to curves in `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiResult {
    /// `N`.
    pub negative_part: QDivisor,
    /// `H = K + D - N` in the lattice basis.
    pub nef_part: Vec<BigRational>,
    /// `H E` for every component `E` of `D`.
    pub h_dot: Vec<BigRational>,
    /// `H^2`, evaluated on `nef_part` directly.
    pub h_squared: BigRational,
}

/// Grow the support of `N` until `H = K + D - N` meets every component of
/// `D` non-negatively.
///
/// Each round adds every component with `H E < 0` and re-solves
/// `H E = 0` on the support; the intersection form on the support must stay
/// negative definite.
pub fn zariski(model: &SurfaceModel) -> Result<ZariskiResult, LatticeError> {
    let mut support: BTreeSet<usize> = BTreeSet::new();
    let mut n = QDivisor::zero();
    let h_dot = |n: &QDivisor| -> Vec<BigRational> {
        (0..model.components.len())
            .map(|i| BigRational::from_integer(model.kd_dot(i).into()) - n.dot(model, i))
            .collect()
    };
    loop {
        let hd = h_dot(&n);
        let negative: Vec<usize> =
            (0..hd.len()).filter(|&i| hd[i].is_negative() && !support.contains(&i)).collect();
        if negative.is_empty() {
            let kd = model.canonical.plus(&model.d_class());
            let mut nef_part: Vec<BigRational> =
                kd.coords().iter().map(|&x| BigRational::from_integer(x.into())).collect();
            for (slot, x) in nef_part.iter_mut().zip(n.to_class(model)) {
                *slot -= x;
            }
            let h_squared = pair_rational(&nef_part, &nef_part);
            return Ok(ZariskiResult { negative_part: n, nef_part, h_dot: hd, h_squared });
        }
        support.extend(negative);
        let s: Vec<usize> = support.iter().copied().collect();
        if !model.contractible(&s) {
            return Err(LatticeError::NotPseudoEffective(model.labels_of(&s)));
        }
        n = model.solve_on(&s).ok_or_else(|| LatticeError::NotPseudoEffective(model.labels_of(&s)))?;
    }
}

/// Exact negative-definiteness test via leading principal minors.
pub fn is_negative_definite(gram: &[Vec<BigRational>]) -> Result<bool, LatticeError> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(LatticeError::NotSymmetric);
    }
    if (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
        return Err(LatticeError::NotSymmetric);
    }
    // Scaling by the positive lcm of all denominators preserves definiteness.
    let lcm = gram
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
    let ints: Vec<Vec<BigInt>> =
        gram.iter().map(|r| r.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect()).collect();
    Ok(linalg::is_negative_definite_int(&ints))
}

/// Numeric consequences of the Zariski structure theory for `D`.
///
/// Checks that need the decomposition are reported as failures when
/// `zariski` is `None` and `kappa_two` is set, and as not applicable
/// otherwise.
pub fn structure_checks(model: &SurfaceModel, zariski: Option<&ZariskiResult>, kappa_two: bool) -> Vec<Verdict> {
    let r = model.components.len();
    let mut out = Vec::new();

    out.push(Verdict::check(
        "component_count",
        r == model.rank(),
        format!("{r} components, lattice rank {}", model.rank()),
    ));
    let edges: usize = (0..r).map(|i| model.valence(i)).sum::<usize>() / 2;
    out.push(Verdict::check(
        "dual_graph_tree",
        edges + 1 == r && model.is_connected(),
        format!("{r} vertices, {edges} edges"),
    ));
    let bad_adjunction: Vec<&str> =
        (0..r).filter(|&i| model.k_dot(i) != -2 - model.self_intersection(i)).map(|i| model.label(i)).collect();
    out.push(Verdict::check(
        "adjunction",
        bad_adjunction.is_empty(),
        if bad_adjunction.is_empty() {
            "K.E = -2 - E^2 on every component".to_string()
        } else {
            format!("fails on {}", bad_adjunction.join(", "))
        },
    ));
    let ddkd = model.d_dot_kd();
    out.push(Verdict::check("d_dot_kd", ddkd == -2, format!("D(K+D) = {ddkd}")));
    let bad_minus_one: Vec<&str> = (0..r)
        .filter(|&i| model.self_intersection(i) == -1 && model.valence(i) <= 2)
        .map(|i| model.label(i))
        .collect();
    out.push(Verdict::check(
        "minus_one_components_branch",
        bad_minus_one.is_empty(),
        if bad_minus_one.is_empty() {
            "every (-1)-component of D meets at least 3 others".to_string()
        } else {
            format!("(-1)-components meeting at most 2 others: {}", bad_minus_one.join(", "))
        },
    ));
    let kkd = model.kkd();
    if kappa_two {
        out.push(Verdict::check("bigenus", kkd >= 0, format!("h0(2K+D) = K(K+D) = {kkd}")));
    } else {
        out.push(Verdict::not_applicable("bigenus", format!("K(K+D) = {kkd}; closed form needs log general type")));
    }

    let Some(z) = zariski else {
        let names = ["negative_part_is_bark", "floor_negative_part", "nef_on_components", "zariski_split", "h_squared_positive"];
        for name in names {
            out.push(if kappa_two {
                Verdict::fail(name, "no Zariski decomposition relative to D")
            } else {
                Verdict::not_applicable(name, "K+D is not pseudo-effective relative to D")
            });
        }
        return out;
    };

    let n = &z.negative_part;
    out.push(match bark(model) {
        Ok(bk) if &bk == n => Verdict::pass("negative_part_is_bark", format!("N = Bk(D) on {} components", n.coefficients.len())),
        Ok(bk) => Verdict::fail(
            "negative_part_is_bark",
            format!("N has support {{{}}}, Bk(D) has {{{}}}", model.labels_of(&n.support().collect::<Vec<_>>()), model.labels_of(&bk.support().collect::<Vec<_>>())),
        ),
        Err(e) => Verdict::fail("negative_part_is_bark", e.to_string()),
    });
    let floor = n.floor();
    out.push(Verdict::check(
        "floor_negative_part",
        floor.is_empty(),
        if floor.is_empty() {
            "all coefficients of N lie in [0,1)".to_string()
        } else {
            let parts: Vec<String> = floor.iter().map(|(&i, v)| format!("{}: {v}", model.label(i))).collect();
            format!("coefficient >= 1 on {}", parts.join(", "))
        },
    ));
    let off_support: Vec<&str> = (0..r).filter(|&i| z.h_dot[i].is_negative()).map(|i| model.label(i)).collect();
    let on_support: Vec<&str> = n.support().filter(|&i| !z.h_dot[i].is_zero()).map(|i| model.label(i)).collect();
    out.push(Verdict::check(
        "nef_on_components",
        off_support.is_empty() && on_support.is_empty(),
        format!(
            "H.E < 0 on {{{}}}; H.E != 0 on Supp N at {{{}}}",
            off_support.join(", "),
            on_support.join(", ")
        ),
    ));
    let kd2 = BigRational::from_integer(model.kd_squared().into());
    let split = &z.h_squared + n.square(model);
    out.push(Verdict::check(
        "zariski_split",
        kd2 == split,
        format!("(K+D)^2 = {} and H^2 + N^2 = {}", Q(kd2.clone()), Q(split.clone())),
    ));
    out.push(if kappa_two {
        Verdict::check("h_squared_positive", z.h_squared.is_positive(), format!("H^2 = {}", Q(z.h_squared.clone())))
    } else {
        Verdict::not_applicable("h_squared_positive", format!("H^2 = {}", Q(z.h_squared.clone())))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusp::{resolve_cusp, CuspSpec};

    fn model(degree: u32, cusps: &[&[u32]]) -> SurfaceModel {
        let res: Vec<_> =
            cusps.iter().map(|m| resolve_cusp(&CuspSpec::new(m.to_vec()).unwrap()).unwrap()).collect();
        build_surface(degree, &res).unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn quartic_and_quintic_self_intersections() {
        let m = model(4, &[&[2], &[2], &[2]]);
        assert_eq!((m.n_blowups(), m.c_prime_sq()), (9, -2));
        let m = model(5, &[&[2, 2, 2], &[2], &[2], &[2]]);
        assert_eq!((m.n_blowups(), m.c_prime_sq()), (14, -7));
        for d in 3..=12u32 {
            assert_eq!(model(d, &[&[d - 1]]).c_prime_sq(), d as i64);
        }
    }

    #[test]
    fn genus_is_enforced() {
        let res = vec![resolve_cusp(&CuspSpec::new(vec![2]).unwrap()).unwrap()];
        assert_eq!(build_surface(4, &res).unwrap_err(), LatticeError::Genus { degree: 4, delta: 1, genus: 2 });
    }

    #[test]
    fn pairing_examples() {
        let m = model(4, &[&[2], &[2], &[2]]);
        let l = Class::basis(m.rank(), 0);
        assert_eq!(pair(&l, &l).unwrap(), 1);
        assert_eq!(pair(m.canonical(), m.canonical()).unwrap(), 0);
        let d0 = m.index_of(ComponentKind::Exceptional { cusp: 0, point: 2 }).unwrap();
        assert_eq!(m.intersection(0, d0), 1);
        assert!(matches!(pair(&l, &Class::basis(3, 0)), Err(LatticeError::Dimension(10, 3))));
    }

    #[test]
    fn kkd_examples() {
        assert_eq!(model(4, &[&[2], &[2], &[2]]).kkd(), 0);
        assert_eq!(model(5, &[&[2, 2, 2], &[2], &[2], &[2]]).kkd(), 0);
        assert_eq!(model(4, &[&[3]]).kkd(), 0);
    }

    #[test]
    fn twig_examples() {
        let m = model(4, &[&[2], &[2], &[2]]);
        let mut w: Vec<Vec<i64>> = maximal_twigs(&m).iter().map(|t| t.weights(&m)).collect();
        w.sort();
        assert_eq!(w, vec![vec![2], vec![2], vec![2], vec![3], vec![3], vec![3]]);

        let m = model(4, &[&[3]]);
        let twigs = maximal_twigs(&m);
        let exc: Vec<Vec<i64>> = twigs.iter().filter(|t| t.components != [0]).map(|t| t.weights(&m)).collect();
        assert_eq!(exc, vec![vec![4], vec![2, 2]]);
        // The unicuspidal C' is itself a twig of positive self-intersection.
        assert!(twigs.iter().any(|t| t.components == [0] && !t.admissible));
    }

    #[test]
    fn smooth_conic_has_no_twigs() {
        let m = build_surface(2, &[]).unwrap();
        assert_eq!(m.components().len(), 1);
        assert!(maximal_twigs(&m).is_empty());
        assert!(is_rod(&m));
    }

    #[test]
    fn quartic_bark_and_zariski() {
        let m = model(4, &[&[2], &[2], &[2]]);
        let bk = bark(&m).unwrap();
        for k in 0..3 {
            let a = m.index_of(ComponentKind::Exceptional { cusp: k, point: 0 }).unwrap();
            let b = m.index_of(ComponentKind::Exceptional { cusp: k, point: 1 }).unwrap();
            assert_eq!(bk.coefficient(a), q(1, 3));
            assert_eq!(bk.coefficient(b), q(1, 2));
        }
        let z = zariski(&m).unwrap();
        assert_eq!(z.negative_part, bk);
        assert_eq!(z.negative_part.square(&m), q(-5, 2));
        assert_eq!(z.h_squared, q(1, 2));
    }

    #[test]
    fn b_twig_bark_of_unicuspidal_quartic() {
        let m = model(4, &[&[3]]);
        let twig = maximal_twigs(&m).into_iter().find(|t| t.components.len() == 2).unwrap();
        let bk = m.solve_on(&twig.components).unwrap();
        assert_eq!(bk.coefficient(twig.components[0]), q(2, 3));
        assert_eq!(bk.coefficient(twig.components[1]), q(1, 3));
        assert!(matches!(bark(&m), Err(LatticeError::NonContractibleTwig(l)) if l == "C'"));
    }

    #[test]
    fn quintic_negative_part_has_zero_floor() {
        let m = model(5, &[&[2, 2, 2], &[2], &[2], &[2]]);
        let z = zariski(&m).unwrap();
        assert_eq!(maximal_twigs(&m).len(), 8);
        assert_eq!(z.negative_part, bark(&m).unwrap());
        assert!(z.negative_part.floor().is_empty());
    }

    #[test]
    fn minus_one_tip_breaks_zariski() {
        // A line through one blown-up point, together with the exceptional curve.
        let comps = vec![
            Component { label: "l".into(), kind: ComponentKind::StrictTransform, class: Class::new(vec![1, -1]) },
            Component {
                label: "E".into(),
                kind: ComponentKind::Exceptional { cusp: 0, point: 0 },
                class: Class::new(vec![0, 1]),
            },
        ];
        let m = SurfaceModel::from_components(1, 1, comps, Class::new(vec![-3, 1])).unwrap();
        assert!(matches!(zariski(&m), Err(LatticeError::NotPseudoEffective(_))));
    }

    #[test]
    fn negative_definite_examples() {
        assert!(is_negative_definite(&[vec![q(-2, 1)]]).unwrap());
        assert!(!is_negative_definite(&[vec![q(-1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]]).unwrap());
        assert!(is_negative_definite(&[vec![q(-1, 2), q(1, 3)], vec![q(1, 3), q(-1, 2)]]).unwrap());
        assert_eq!(is_negative_definite(&[vec![q(-1, 1), q(0, 1)]]), Err(LatticeError::NotSymmetric));
        assert_eq!(
            is_negative_definite(&[vec![q(-1, 1), q(1, 1)], vec![q(0, 1), q(-1, 1)]]),
            Err(LatticeError::NotSymmetric)
        );
    }

    #[test]
    fn quartic_twig_gram_is_negative_definite() {
        let m = model(4, &[&[2], &[2], &[2]]);
        let support: Vec<usize> = maximal_twigs(&m).into_iter().flat_map(|t| t.components).collect();
        let gram: Vec<Vec<BigRational>> = support
            .iter()
            .map(|&i| support.iter().map(|&j| BigRational::from_integer(m.intersection(i, j).into())).collect())
            .collect();
        assert!(is_negative_definite(&gram).unwrap());
    }

    #[test]
    fn structure_checks_on_quartic_and_unicusp() {
        let m = model(4, &[&[2], &[2], &[2]]);
        let z = zariski(&m).unwrap();
        let v = structure_checks(&m, Some(&z), true);
        assert!(v.iter().all(|v| !v.is_fail()), "{v:?}");

        let m = model(4, &[&[3]]);
        assert!(zariski(&m).is_err());
        let v = structure_checks(&m, None, false);
        assert!(v.iter().all(|v| !v.is_fail()), "{v:?}");
        assert!(v.iter().any(|v| v.name == "d_dot_kd" && v.status == crate::Status::Pass));
    }

    #[test]
    fn rod_and_fork_classifiers() {
        let quartic = model(4, &[&[2], &[2], &[2]]);
        assert!(!is_rod(&quartic));
        assert!(!is_rational_fork(&quartic));
        // Unicuspidal: one branching vertex, but C' is not a contractible twig.
        assert!(!is_rational_fork(&model(4, &[&[3]])));
    }
}
