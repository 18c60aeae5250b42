//! Deterministic property sweeps used by `cuspcalc verify`.
//!
//! Each sweep enumerates a bounded family exhaustively and reports one
//! verdict. The randomized and brute-force versions live in the test suites.

use num_integer::Integer;
use num_rational::BigRational;

use crate::chain::{self, Inductance, LinearChain};
use crate::cusp::{self, CuspSpec};
use crate::verdict::Verdict;

/// All admissible chains with entries in `lo..=hi` and length `1..=max_len`.
pub fn admissible_chains(lo: i64, hi: i64, max_len: usize) -> Vec<LinearChain> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (lo..=hi).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned().map(LinearChain::new));
    }
    out
}

/// Every chain identity that a single admissible chain must satisfy.
/// Returns a description of the first violation.
pub fn chain_identities(a: &LinearChain) -> Result<(), String> {
    let err = |what: &str| format!("{a}: {what}");
    let d = |c: &LinearChain| chain::discriminant(c);
    let head = chain::head_removed(a).map_err(|e| err(&e.to_string()))?;
    let tail = chain::tail_removed(a).map_err(|e| err(&e.to_string()))?;
    let t = chain::transpose(a);

    if a.len() > 1 {
        if d(a) != d(&t) {
            return Err(err("d(A) != d(transpose A)"));
        }
        let inner = chain::tail_removed(&head).map_err(|e| err(&e.to_string()))?;
        if d(&head) * d(&tail) - d(a) * d(&inner) != 1.into() {
            return Err(err("d(head_removed) d(tail_removed) - d(A) d(inner) != 1"));
        }
    }
    if !(d(a) > d(&head) && d(&head) > 0.into() && d(a).gcd(&d(&head)) == 1.into()) {
        return Err(err("d(A) > d(head_removed A) > 0 with coprime values fails"));
    }

    let e = chain::inductance(a).map_err(|e| err(&e.to_string()))?;
    if chain::inverse_inductance(&e).map_err(|e| err(&e.to_string()))? != *a {
        return Err(err("inverse_inductance(inductance(A)) != A"));
    }

    let b = chain::inverse_inductance(&e.complement()).map_err(|e| err(&e.to_string()))?;
    let et = chain::inductance(&t).map_err(|e| err(&e.to_string()))?;
    let ebt = chain::inductance(&chain::transpose(&b)).map_err(|e| err(&e.to_string()))?;
    if d(a) != d(&b) || et.value() + ebt.value() != BigRational::from_integer(1.into()) {
        return Err(err("complementary inductances do not share discriminant and transposed sum"));
    }

    let star = chain::adjoint(a).map_err(|e| err(&e.to_string()))?;
    if chain::adjoint(&star).map_err(|e| err(&e.to_string()))? != *a {
        return Err(err("A** != A"));
    }
    if chain::transpose(&star) != chain::adjoint(&t).map_err(|e| err(&e.to_string()))? {
        return Err(err("transpose(A*) != (transpose A)*"));
    }
    let star_head = chain::head_removed(&star).map_err(|e| err(&e.to_string()))?;
    if d(&star) != d(a) || d(a) != d(&star_head) + d(&tail) {
        return Err(err("d(A) = d(A*) = d(head_removed A*) + d(tail_removed A) fails"));
    }

    for n in 1..=3usize {
        let lhs = chain::adjoint(&a.pushed(n as i64 + 1)).map_err(|e| err(&e.to_string()))?;
        let rhs = chain::star(&chain::tw(n), &star).map_err(|e| err(&e.to_string()))?;
        if lhs != rhs {
            return Err(err(&format!("[A,{}]* != tw({n}) * A*", n + 1)));
        }
    }
    let parts: Vec<LinearChain> = a.weights().iter().rev().map(|&w| chain::tw((w - 1) as usize)).collect();
    if chain::star_all(&parts).map_err(|e| err(&e.to_string()))? != star {
        return Err(err("A* != tw(a_r) * ... * tw(a_1)"));
    }
    Ok(())
}

fn chain_sweep() -> Verdict {
    const NAME: &str = "chain_identities";
    let chains = admissible_chains(2, 5, 4);
    for c in &chains {
        if let Err(e) = chain_identities(c) {
            return Verdict::fail(NAME, e);
        }
    }
    let small = admissible_chains(2, 4, 2);
    for a in &small {
        for b in &small {
            for c in &small {
                let l = chain::star(&chain::star(a, b).unwrap(), c).unwrap();
                let r = chain::star(a, &chain::star(b, c).unwrap()).unwrap();
                if l != r {
                    return Verdict::fail(NAME, format!("star is not associative on {a}, {b}, {c}"));
                }
            }
        }
    }
    Verdict::pass(NAME, format!("{} chains, {} star triples", chains.len(), small.len().pow(3)))
}

fn inductance_sweep(max_denom: i64) -> Verdict {
    const NAME: &str = "inductance_round_trip";
    let mut count = 0;
    for q in 2..=max_denom {
        for p in (1..q).filter(|p| p.gcd(&q) == 1) {
            let e = Inductance::from_ratio(p, q).expect("0 < p/q < 1");
            let c = match chain::inverse_inductance(&e) {
                Ok(c) => c,
                Err(err) => return Verdict::fail(NAME, format!("{p}/{q}: {err}")),
            };
            if !c.is_admissible() || chain::inductance(&c).ok() != Some(e) || chain::discriminant(&c) != q.into() {
                return Verdict::fail(NAME, format!("{p}/{q} -> {c} does not round-trip"));
            }
            count += 1;
        }
    }
    Verdict::pass(NAME, format!("{count} reduced fractions with denominator <= {max_denom}"))
}

/// Cusps with one or two characteristic pairs and small exponents.
pub fn characteristic_family() -> Vec<CuspSpec> {
    let mut out = Vec::new();
    for n in 2..=8u32 {
        for b1 in n + 1..=24 {
            if let Ok(s) = CuspSpec::from_characteristic(n, &[b1]) {
                out.push(s);
            }
            for b2 in b1 + 1..=b1 + 5 {
                if let Ok(s) = CuspSpec::from_characteristic(n, &[b1, b2]) {
                    out.push(s);
                }
            }
        }
    }
    out
}

fn cusp_sweep() -> Verdict {
    const NAME: &str = "cusp_resolutions";
    let family = characteristic_family();
    for spec in &family {
        let res = match cusp::resolve_cusp(spec) {
            Ok(r) => r,
            Err(e) => return Verdict::fail(NAME, format!("{spec}: {e}")),
        };
        let v = cusp::check_cres(&res);
        if v.is_fail() {
            return Verdict::fail(NAME, v.detail);
        }
        if (res.omega() + res.eta()) as usize != res.n_blowups() || res.eta_per_stage().iter().any(|&e| e < 1) {
            return Verdict::fail(NAME, format!("{spec}: blow-up counts inconsistent"));
        }
        let minus_one: Vec<usize> =
            (0..res.n_blowups()).filter(|&i| res.self_intersections()[i] == -1).collect();
        if minus_one != [res.d0()] {
            return Verdict::fail(NAME, format!("{spec}: (-1)-components {minus_one:?}"));
        }
        match res.blow_down() {
            Ok(order) if order.iter().copied().eq((0..res.n_blowups()).rev()) => {}
            Ok(order) => return Verdict::fail(NAME, format!("{spec}: contraction order {order:?}")),
            Err(e) => return Verdict::fail(NAME, format!("{spec}: {e}")),
        }
    }
    Verdict::pass(NAME, format!("{} cusps from characteristic exponents", family.len()))
}

/// Run every sweep.
pub fn property_suite() -> Vec<Verdict> {
    vec![chain_sweep(), inductance_sweep(30), cusp_sweep()]
}
