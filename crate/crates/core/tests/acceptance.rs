//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every comparison is exact.

use std::process::ExitCode;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cuspcalc::chain::{self, Inductance, LinearChain};
use cuspcalc::cusp::{self, CuspSpec, LocalResolution};
use cuspcalc::lattice::{self, ComponentKind, SurfaceModel};
use cuspcalc::verifier::{self, CurveSpec};
use cuspcalc::Status;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// Determinant of the tridiagonal matrix with `w` on the diagonal and `-1`
/// off it, by fraction-free elimination on the full matrix.
fn det_oracle(w: &[i64]) -> i128 {
    let n = w.len();
    let mut a = vec![vec![0i128; n]; n];
    for i in 0..n {
        a[i][i] = w[i] as i128;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            // Swap in a row with a non-zero pivot; flips the sign.
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else { return 0 };
            a.swap(k, r);
            for x in a[k].iter_mut() {
                *x = -*x;
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        a[n - 1][n - 1]
    }
}

fn d(c: &LinearChain) -> i128 {
    det_oracle(c.weights())
}

fn ch(w: &[i64]) -> LinearChain {
    LinearChain::new(w.to_vec())
}

fn head(c: &LinearChain) -> LinearChain {
    ch(&c.weights()[1..])
}

fn tail(c: &LinearChain) -> LinearChain {
    ch(&c.weights()[..c.len() - 1])
}

fn rev(c: &LinearChain) -> LinearChain {
    ch(&c.weights().iter().rev().copied().collect::<Vec<_>>())
}

fn e(c: &LinearChain) -> BigRational {
    BigRational::new(d(&head(c)).into(), d(c).into())
}

fn resolutions(spec: &CurveSpec) -> Vec<LocalResolution> {
    spec.cusps.iter().map(|c| cusp::resolve_cusp(c).expect("catalog cusp resolves")).collect()
}

fn model_of(spec: &CurveSpec) -> (Vec<LocalResolution>, SurfaceModel) {
    let res = resolutions(spec);
    let model = lattice::build_surface(spec.degree, &res).expect("catalog curve has genus 0");
    (res, model)
}

fn catalog_curve(name: &str) -> CurveSpec {
    verifier::catalog().into_iter().find(|c| c.name.as_deref() == Some(name)).expect("catalog entry")
}

fn global(model: &SurfaceModel, cusp: usize, point: usize) -> usize {
    model.index_of(ComponentKind::Exceptional { cusp, point }).expect("component exists")
}

/// `D^2` from the dual graph: self-intersections plus twice the edges.
fn d_squared_from_graph(model: &SurfaceModel) -> i64 {
    let n = model.components().len();
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            total += model.intersection(i, j);
        }
    }
    total
}

/// `K(K+D) = K^2 + K.D` with `K^2 = 9 - #blow-ups`.
fn kkd_from_lattice(model: &SurfaceModel) -> i64 {
    let k_sq = 9 - model.n_blowups() as i64;
    k_sq + (0..model.components().len()).map(|i| model.k_dot(i)).sum::<i64>()
}

fn tricuspidal_quartic() -> Outcome {
    let spec = catalog_curve("quartic");
    let (res, model) = model_of(&spec);
    ensure!(model.c_prime_sq() == -2, "(C')^2 = {}", model.c_prime_sq());
    ensure!(model.c_prime_sq() == 7 - 3 * 3, "bound not attained");
    ensure!(kkd_from_lattice(&model) == 0, "K(K+D) = {}", kkd_from_lattice(&model));
    for r in &res {
        ensure!(r.h() == 1 && r.eta_per_stage() == [1], "{}: h = {}, eta = {:?}", r.spec(), r.h(), r.eta_per_stage());
    }
    let z = lattice::zariski(&model).map_err(|e| e.to_string())?;
    let bk = lattice::bark(&model).map_err(|e| e.to_string())?;
    ensure!(z.negative_part == bk, "N differs from the bark of D");
    let mut expected = Vec::new();
    for (k, r) in res.iter().enumerate() {
        for &p in r.a_components().iter().flatten() {
            expected.push((global(&model, k, p), q(1, 3)));
        }
        for &p in r.b_components().iter().flatten() {
            expected.push((global(&model, k, p), q(1, 2)));
        }
    }
    expected.sort();
    let actual: Vec<(usize, BigRational)> =
        z.negative_part.coefficients().iter().map(|(&i, c)| (i, c.clone())).collect();
    ensure!(actual == expected, "N = {actual:?}, expected {expected:?}");
    ensure!(z.h_squared == q(1, 2), "H^2 = {}", z.h_squared);

    // Three cusps with (C')^2 = -2 on a quintic: genus 0, yet impossible.
    let fake = CurveSpec::new(
        Some("fabricated"),
        5,
        [&[3u32, 2][..], &[2], &[2]].iter().map(|m| CuspSpec::new(m.to_vec()).unwrap()).collect(),
    );
    let report = verifier::analyze(&fake).map_err(|e| e.to_string())?;
    ensure!(report.c_prime_sq == -2, "fabricated curve has (C')^2 = {}", report.c_prime_sq);
    ensure!(!report.all_pass(), "fabricated tricuspidal quintic was not flagged");
    Ok("(C')^2 = -2 = 7-3n, K(K+D) = 0, N = bark with 1/3 and 1/2, H^2 = 1/2; fabricated quintic flagged".into())
}

fn four_cusp_quintic() -> Outcome {
    let spec = catalog_curve("quintic4");
    let (res, model) = model_of(&spec);
    ensure!(model.c_prime_sq() == -7, "(C')^2 = {}", model.c_prime_sq());
    ensure!(model.c_prime_sq() <= 7 - 3 * 4, "bound -7 <= -5 fails");
    let eta: i64 = res.iter().map(|r| r.eta() as i64).sum();
    let kkd = kkd_from_lattice(&model);
    ensure!(kkd == 0 && kkd == 7 - 2 * 4 - model.c_prime_sq() - eta, "K(K+D) = {kkd}, sum eta = {eta}");
    let report = verifier::analyze(&spec).map_err(|e| e.to_string())?;
    ensure!(
        report.verdict("self_intersection_bound").map(|v| v.status) == Some(Status::Pass),
        "bound verdict did not pass"
    );
    Ok("(C')^2 = -7 <= -5, K(K+D) = 0 = 7-2n-(C')^2-sum eta".into())
}

fn unicuspidal_family() -> Outcome {
    for deg in 3..=12u32 {
        let spec = catalog_curve(&format!("unicusp_{deg}"));
        let (_, model) = model_of(&spec);
        ensure!(model.c_prime_sq() == deg as i64, "degree {deg}: (C')^2 = {}", model.c_prime_sq());
    }
    Ok("(C')^2 = d for d = 3..12".into())
}

fn double_entry() -> Outcome {
    let cat = verifier::catalog();
    for spec in &cat {
        let (res, model) = model_of(spec);
        let n = spec.n() as i64;
        let c2 = model.c_prime_sq();
        let eta: i64 = res.iter().map(|r| r.eta() as i64).sum();
        let omega2: i64 = res.iter().map(|r| r.omega() as i64 - 2).sum();
        let kkd = kkd_from_lattice(&model);
        ensure!(kkd == 7 - 2 * n - c2 - eta, "{spec}: K(K+D) = {kkd} vs {}", 7 - 2 * n - c2 - eta);
        ensure!(kkd == model.kkd(), "{spec}: lattice K(K+D) disagrees with the model");
        let d2 = d_squared_from_graph(&model);
        ensure!(d2 == c2 - omega2, "{spec}: D^2 = {d2} vs {}", c2 - omega2);
        ensure!(d2 == model.d_squared(), "{spec}: D^2 disagrees with the model");
    }
    Ok(format!("{} catalog curves, both identities exact", cat.len()))
}

/// Random cusp with one to three characteristic pairs.
fn random_cusp(rng: &mut ChaCha8Rng) -> Option<CuspSpec> {
    let n = rng.gen_range(2..=12u32);
    let pairs = rng.gen_range(1..=3usize);
    let mut exps = Vec::new();
    let mut e = n;
    let mut last = n;
    for _ in 0..pairs {
        if e == 1 {
            break;
        }
        let b = (last + 1..last + 1 + 2 * n).filter(|b| b.gcd(&e) < e).nth(rng.gen_range(0..n as usize))?;
        e = e.gcd(&b);
        last = b;
        exps.push(b);
    }
    if e != 1 {
        let b = (last + 1..).find(|b| b.gcd(&e) == 1)?;
        exps.push(b);
    }
    CuspSpec::from_characteristic(n, &exps).ok()
}

fn comb_relations_hold(r: &LocalResolution) -> Result<(), String> {
    for i in 0..r.h() {
        let (a, b, eta) = (&r.a_chains()[i], &r.b_chains()[i], r.eta_per_stage()[i] as usize);
        let b_star = chain::adjoint(b).map_err(|e| e.to_string())?;
        let rhs = chain::star(&chain::tw(eta), &b_star).map_err(|e| e.to_string())?;
        ensure!(&rhs == a, "{}: stage {}: A = {a}, tw(eta)*B^* = {rhs}", r.spec(), i + 1);
        let a_star = chain::adjoint(a).map_err(|e| e.to_string())?;
        let mut bw = b.weights().to_vec();
        bw.push(eta as i64 + 1);
        ensure!(a_star == ch(&bw), "{}: stage {}: A^* = {a_star}, [B, eta+1] = {bw:?}", r.spec(), i + 1);
    }
    Ok(())
}

fn comb_relations() -> Outcome {
    let mut stages = 0;
    for spec in verifier::catalog() {
        for r in resolutions(&spec) {
            comb_relations_hold(&r)?;
            stages += r.h();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut random = 0;
    while random < 150 {
        let Some(spec) = random_cusp(&mut rng) else { continue };
        let r = cusp::resolve_cusp(&spec).map_err(|e| format!("{spec}: {e}"))?;
        comb_relations_hold(&r)?;
        stages += r.h();
        random += 1;
    }
    Ok(format!("catalog cusps plus {random} random cusps, {stages} stages"))
}

fn random_chain(rng: &mut ChaCha8Rng) -> LinearChain {
    let len = rng.gen_range(1..=8);
    LinearChain::new((0..len).map(|_| rng.gen_range(2..=6)).collect())
}

fn chain_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_261_015);
    let count = 1500;
    for _ in 0..count {
        let a = random_chain(&mut rng);
        ensure!(BigInt::from(d(&a)) == chain::discriminant(&a), "{a}: discriminant disagrees with oracle");
        let ind = chain::inductance(&a).map_err(|e| e.to_string())?;
        ensure!(ind.value() == &e(&a), "{a}: inductance disagrees with oracle");

        // Determinant identities.
        if a.len() >= 2 {
            ensure!(d(&a) == d(&rev(&a)), "{a}: d(A) != d(tA)");
            let inner = tail(&head(&a));
            ensure!(d(&head(&a)) * d(&tail(&a)) - d(&a) * d(&inner) == 1, "{a}: determinant identity fails");
        }
        let (da, dh) = (d(&a), d(&head(&a)));
        ensure!(da > dh && dh > 0 && da.gcd(&dh) == 1, "{a}: d(A) > d(head) > 0 coprime fails");

        // Inductance bijection.
        ensure!(chain::inverse_inductance(&ind).map_err(|e| e.to_string())? == a, "{a}: e^-1(e(A)) != A");

        // Complementary inductances.
        let b = chain::inverse_inductance(&ind.complement()).map_err(|e| e.to_string())?;
        ensure!(e(&a) + e(&b) == q(1, 1), "{a}: e(A) + e(B) != 1");
        ensure!(d(&a) == d(&b), "{a}, {b}: d(A) != d(B)");
        ensure!(e(&rev(&a)) + e(&rev(&b)) == q(1, 1), "{a}, {b}: e(tA) + e(tB) != 1");

        // Adjoint.
        let s = chain::adjoint(&a).map_err(|e| e.to_string())?;
        ensure!(e(&s) == q(1, 1) - e(&rev(&a)), "{a}: A^* is not e^-1(1 - e(tA))");
        ensure!(chain::adjoint(&s).map_err(|e| e.to_string())? == a, "{a}: A** != A");
        ensure!(rev(&s) == chain::adjoint(&rev(&a)).map_err(|e| e.to_string())?, "{a}: t(A*) != (tA)*");
        ensure!(d(&a) == d(&s) && d(&a) == d(&head(&s)) + d(&tail(&a)), "{a}: d(A) = d(A*) = d(head A*) + d(tail A) fails");

        // Adjoints through twigs of (-2)-curves.
        let n = rng.gen_range(1..=5usize);
        let mut ext = a.weights().to_vec();
        ext.push(n as i64 + 1);
        let lhs = chain::adjoint(&ch(&ext)).map_err(|e| e.to_string())?;
        let mut expect = vec![2i64; n];
        expect.extend_from_slice(&s.weights()[1..]);
        expect[n - 1] += s.weights()[0] - 1;
        ensure!(lhs == ch(&expect), "{a}: [A,{}]* = {lhs}, expected {expect:?}", n + 1);
        let twigs: Vec<LinearChain> = a.weights().iter().rev().map(|&w| chain::tw((w - 1) as usize)).collect();
        ensure!(chain::star_all(&twigs).map_err(|e| e.to_string())? == s, "{a}: A* != tw(a_r)*...*tw(a_1)");

        // Associativity.
        let (b, c) = (random_chain(&mut rng), random_chain(&mut rng));
        let l = chain::star(&chain::star(&a, &b).unwrap(), &c).unwrap();
        let r = chain::star(&a, &chain::star(&b, &c).unwrap()).unwrap();
        ensure!(l == r, "({a}*{b})*{c} != {a}*({b}*{c})");
    }
    Ok(format!("{count} random admissible chains, all identities exact"))
}

/// All admissible chains with discriminant at most `max`, by depth-first
/// extension. Appending `w` gives `d([A, w]) = w d(A) - d(A without last)`,
/// which only grows for admissible chains.
fn chains_up_to(max: i128) -> Vec<Vec<i64>> {
    fn go(w: &mut Vec<i64>, d_prev: i128, d_cur: i128, max: i128, out: &mut Vec<Vec<i64>>) {
        for a in 2..=max as i64 {
            let d_next = a as i128 * d_cur - d_prev;
            if d_next > max {
                break;
            }
            w.push(a);
            out.push(w.clone());
            go(w, d_cur, d_next, max, out);
            w.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, 1, max, &mut out);
    out
}

fn inverse_inductance_oracle() -> Outcome {
    let max = 30;
    let all = chains_up_to(max as i128);
    let mut fractions = 0;
    for den in 2..=max {
        let with_den: Vec<&Vec<i64>> = all.iter().filter(|w| det_oracle(w) == den as i128).collect();
        for num in (1..den).filter(|p| p.gcd(&den) == 1) {
            let target = q(num, den);
            let hits: Vec<&&Vec<i64>> = with_den.iter().filter(|w| e(&ch(w)) == target).collect();
            ensure!(hits.len() == 1, "{num}/{den}: {} chains found", hits.len());
            let inv = chain::inverse_inductance(&Inductance::from_ratio(num, den).unwrap()).map_err(|e| e.to_string())?;
            ensure!(inv.weights() == hits[0].as_slice(), "{num}/{den}: enumeration {:?}, inverse {inv}", hits[0]);
            fractions += 1;
        }
        ensure!(
            with_den.len() == (1..den).filter(|p| p.gcd(&den) == 1).count(),
            "denominator {den}: {} chains for the reduced fractions",
            with_den.len()
        );
    }
    Ok(format!("{fractions} reduced fractions, {} enumerated chains", all.len()))
}

fn structural_suite() -> Outcome {
    let cat = verifier::catalog();
    let mut decomposed = 0;
    for spec in &cat {
        let (_, model) = model_of(spec);
        let comps = model.components().len();
        ensure!(comps == 1 + model.n_blowups(), "{spec}: {comps} components");
        let d_kd: i64 = (0..comps).map(|i| model.kd_dot(i)).sum();
        ensure!(d_kd == -2, "{spec}: D(K+D) = {d_kd}");
        for i in 0..comps {
            ensure!(
                model.k_dot(i) == -2 - model.self_intersection(i),
                "{spec}: adjunction fails on {}",
                model.label(i)
            );
        }
        match lattice::zariski(&model) {
            Ok(z) => {
                decomposed += 1;
                ensure!(z.negative_part.floor().is_empty(), "{spec}: floor(N) != 0");
                for i in 0..comps {
                    let on_support = z.negative_part.coefficients().contains_key(&i);
                    let h = &z.h_dot[i];
                    ensure!(*h >= q(0, 1), "{spec}: H.{} = {h}", model.label(i));
                    ensure!(!on_support || *h == q(0, 1), "{spec}: H.{} = {h} on Supp N", model.label(i));
                }
                if spec.n() >= 3 {
                    ensure!(z.h_squared > q(0, 1), "{spec}: H^2 = {}", z.h_squared);
                }
            }
            Err(err) => ensure!(spec.n() < 3, "{spec}: no decomposition: {err}"),
        }
    }
    Ok(format!("{} catalog curves, {decomposed} with a Zariski decomposition of K+D", cat.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 tricuspidal quartic", tricuspidal_quartic),
        ("2 four-cusp quintic", four_cusp_quintic),
        ("3 unicuspidal family", unicuspidal_family),
        ("4 double-entry bookkeeping", double_entry),
        ("5 comb adjoint relations", comb_relations),
        ("6 chain algebra properties", chain_properties),
        ("7 inverse inductance oracle", inverse_inductance_oracle),
        ("8 structural suite", structural_suite),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
