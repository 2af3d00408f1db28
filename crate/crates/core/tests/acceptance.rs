//! The acceptance criteria, one line each.
//!
//! Run with `cargo test -p wasp-core --test acceptance`. Criteria listed in
//! `KNOWN_RED` are reported as failures without failing the run; any other
//! failure, or a known-red criterion that starts passing, fails the run.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wasp_core::data::{fit_theta, sample_events};
use wasp_core::{Analysis, ClassKey, CoreSet, Poly, RationalFn, ThetaVar};

use common::certain::Pair;
use common::gen::{program_text, Shape};
use common::oracle::{compare, Oracle};
use common::{all_events, analyse, q, random_assignment, P1, SINGLE};

type Outcome = Result<String, String>;

/// Criterion 7: the certain-fact theorem does not hold as stated, because
/// the classes of the two programs are built from different stable models.
const KNOWN_RED: &[u32] = &[7];

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Ok(detail.into())
    } else {
        Err(detail.into())
    }
}

/// The nine classes of P1 in the order of the published table.
fn p1_keys(a: &Analysis) -> Vec<ClassKey> {
    let id = |name: &str| {
        a.models()
            .id_of(a.universe().parse_event(name).unwrap())
            .unwrap()
    };
    let (na, ab, ac) = (id("-a"), id("a b"), id("a c"));
    let core = |ids: &[usize]| ClassKey::Core(CoreSet::from_ids(ids.iter().copied()));
    vec![
        ClassKey::Inconsistent,
        core(&[]),
        core(&[na]),
        core(&[ab]),
        core(&[ac]),
        core(&[na, ab]),
        core(&[na, ac]),
        core(&[ab, ac]),
        core(&[na, ab, ac]),
    ]
}

fn p1_theta(a: &Analysis) -> Poly {
    let u = a.universe();
    Poly::var(ThetaVar::new(
        u.parse_event("a b").unwrap(),
        u.parse_event("a").unwrap(),
    ))
}

fn c1_models() -> Outcome {
    let a = analyse(P1);
    let got: Vec<String> = a.models().iter().map(|m| a.universe().render(m)).collect();
    check(got == ["-a", "a b", "a c"], format!("{got:?}"))
}

fn c2_choice_weights() -> Outcome {
    let a = analyse("0.3 :: a.\n0.6 :: b.");
    let u = a.universe();
    let got: Vec<_> = ["a b", "a -b", "-a b", "-a -b"]
        .iter()
        .map(|t| {
            a.choices()
                .weight(a.choices().id_of(u.parse_event(t).unwrap()).unwrap())
                .clone()
        })
        .collect();
    let want = [q(9, 50), q(3, 25), q(21, 50), q(7, 25)];
    let decimals = [q(18, 100), q(12, 100), q(42, 100), q(28, 100)];
    check(
        got == want && got == decimals,
        got.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", "),
    )
}

fn c3_census() -> Outcome {
    let a = analyse(P1);
    let sizes: Vec<u128> = p1_keys(&a).iter().map(|&k| a.classes().size(k)).collect();
    let total: u128 = sizes.iter().sum();
    check(
        sizes == [37, 9, 9, 3, 3, 0, 0, 2, 1] && total == 64 && a.classes().total_size() == 64,
        format!("{sizes:?}, total {total}"),
    )
}

fn c4_class_weights() -> Outcome {
    let a = analyse(P1);
    let t = p1_theta(&a);
    let c = |n, d| Poly::constant(q(n, d));
    let one_minus_t = &Poly::one() - &t;
    let want = [
        Poly::zero(),
        Poly::zero(),
        c(7, 10),
        t.scale(&q(3, 10)),
        one_minus_t.scale(&q(3, 10)),
        &c(7, 10) + &t.scale(&q(3, 10)),
        &c(7, 10) + &one_minus_t.scale(&q(3, 10)),
        c(3, 10),
        Poly::one(),
    ];
    let got: Vec<Poly> = p1_keys(&a).iter().map(|&k| a.weight_class(k)).collect();
    check(
        got == want,
        got.iter()
            .map(|p| a.render_poly(p))
            .collect::<Vec<_>>()
            .join(" | "),
    )
}

fn c5_normalizer() -> Outcome {
    let a = analyse(P1);
    let z = a.normalizer().map_err(|e| e.to_string())?;
    check(*z == Poly::constant(q(23, 10)), a.render_poly(z))
}

fn c6_probabilities() -> Outcome {
    let a = analyse(P1);
    let t = p1_theta(&a);
    let c = |n, d| Poly::constant(q(n, d));
    let want: Vec<RationalFn> = [
        Poly::zero(),
        Poly::zero(),
        c(7, 207),
        t.scale(&q(1, 23)),
        (&Poly::one() - &t).scale(&q(1, 23)),
        Poly::zero(),
        Poly::zero(),
        c(3, 46),
        c(10, 23),
    ]
    .into_iter()
    .map(RationalFn::from)
    .collect();
    let got: Vec<RationalFn> = p1_keys(&a)
        .iter()
        .map(|&k| a.prob_class_event(k))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(
        got == want,
        got.iter()
            .map(|f| a.render_fn(f))
            .collect::<Vec<_>>()
            .join(" | "),
    )
}

fn c7_certain_facts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tested, mut failures, mut first) = (0, 0, None);
    while tested < 200 {
        let text = program_text(&mut rng, Shape::default(), true);
        let Some(pair) = Pair::new(&text) else {
            continue;
        };
        tested += 1;
        if let Err(why) = pair.event_weights_agree() {
            failures += 1;
            first.get_or_insert_with(|| format!("{:?}: {why}", text));
        }
    }
    let detail = format!("{failures}/{tested} programs differ");
    match first {
        None => Ok(detail),
        Some(example) => Err(format!("{detail}; first: {example}")),
    }
}

fn c8_two_distributions() -> Outcome {
    let a = analyse(P1);
    let u = a.universe();
    let e = u.parse_event("a").unwrap();
    let tc = a.prob_tc(a.choices().id_of(e).unwrap());
    let pe = a
        .prob_event(e)
        .map_err(|e| e.to_string())?
        .as_constant()
        .unwrap();
    check(
        tc == q(3, 10) && pe == q(3, 46) && tc != pe,
        format!("Pr_T(a) = {tc}, Pr_E(a) = {pe}"),
    )
}

fn c9_kolmogorov() -> Outcome {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut samples = 0;
    while samples < 100 {
        let text = program_text(&mut rng, Shape::default(), false);
        let Ok(a) = Analysis::new(&common::program(&text), &Default::default()) else {
            continue;
        };
        if a.normalizer().is_err() {
            continue;
        }
        let theta = random_assignment(&a, &mut rng);
        if a.normalizer().unwrap().eval(&theta).unwrap().is_zero() {
            continue;
        }
        samples += 1;
        let eval = |events: &[wasp_core::Event]| {
            a.prob_event_set(events.iter().copied())
                .unwrap()
                .eval(&theta)
                .unwrap()
        };
        let mut events = all_events(&a);
        for &e in &events {
            let p = a.eval_prob(a.class_of(e), &theta).unwrap();
            if p < q(0, 1) {
                return Err(format!("{text:?}: Pr_E({}) = {p}", a.render_event(e)));
            }
        }
        if eval(&events) != q(1, 1) {
            return Err(format!("{text:?}: Pr_E(E) = {}", eval(&events)));
        }
        for _ in 0..5 {
            events.shuffle(&mut rng);
            let i = rng.random_range(0..=events.len());
            let j = rng.random_range(i..=events.len());
            let (x, y) = (&events[..i], &events[i..j]);
            let joint: Vec<_> = x.iter().chain(y).copied().collect();
            if eval(&joint) != eval(x) + eval(y) {
                return Err(format!("{text:?}: additivity fails"));
            }
        }
    }
    Ok(format!("{samples} assignments"))
}

fn c10_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut agreed, mut rejected) = (0, 0);
    for _ in 0..500 {
        let text = program_text(&mut rng, Shape::default(), false);
        match compare(&text, &mut rng) {
            Ok(true) => agreed += 1,
            Ok(false) => rejected += 1,
            Err(why) => return Err(format!("{text:?}: {why}")),
        }
    }
    Ok(format!(
        "{agreed} programs agree, {rejected} rejected by both"
    ))
}

fn c11_round_trip() -> Outcome {
    let a = analyse(P1);
    let var = a.constraints().free_vars().next().unwrap();
    let truth = a.theta([(var, q(7, 10))].into_iter().collect()).unwrap();
    let data = sample_events(&a, &truth, 10_000, 11).map_err(|e| e.to_string())?;
    let fit = fit_theta(&a, &data, 20).map_err(|e| e.to_string())?;
    let got = fit.theta.get(&var).unwrap().clone();
    let err = if got > q(7, 10) {
        &got - q(7, 10)
    } else {
        q(7, 10) - &got
    };
    check(err <= q(1, 10), format!("fitted {got}"))
}

fn c12_single() -> Outcome {
    let oracle = Oracle::new(&common::program(SINGLE));
    let models = oracle.models.clone().ok_or("oracle: inconsistent model")?;
    let eval = oracle.evaluate(&Default::default());
    let lambda: Vec<_> = eval
        .events
        .iter()
        .filter(|(e, _, _)| {
            common::oracle::consistent(e) && models.iter().all(|s| s.is_subset(e) || e.is_subset(s))
        })
        .collect();
    let oracle_ok = models.len() == 1
        && oracle.render(&models[0]) == "-a"
        && eval.z == q(7, 10)
        && lambda.len() == 4
        && lambda.iter().all(|(_, _, p)| *p == Some(q(1, 4)));
    if !oracle_ok {
        return Err("oracle disagrees with the golden values".into());
    }

    let a = analyse(SINGLE);
    let u = a.universe();
    let golden = ["", "-a", "b -a", "-a -b"];
    let probs_ok = golden.iter().all(|t| {
        let e = u.parse_event(t).unwrap();
        a.class_of(e) == a.lambda()
            && a.prob_event(e).ok().and_then(|p| p.as_constant()) == Some(q(1, 4))
    });
    let models: Vec<String> = a.models().iter().map(|m| u.render(m)).collect();
    check(
        models == ["-a"]
            && a.classes().size(a.lambda()) == 4
            && a.normalizer().ok() == Some(&Poly::constant(q(7, 10)))
            && probs_ok,
        format!("models {models:?}, Z = {}", a.render_poly(a.report().z())),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "P1 stable models", c1_models),
        (2, "total-choice weights", c2_choice_weights),
        (3, "P1 class census", c3_census),
        (4, "P1 class weights", c4_class_weights),
        (5, "P1 normalizer", c5_normalizer),
        (6, "P1 probability table", c6_probabilities),
        (7, "certain-fact theorem", c7_certain_facts),
        (8, "two distributions", c8_two_distributions),
        (9, "Kolmogorov axioms", c9_kolmogorov),
        (10, "oracle equivalence", c10_oracle),
        (11, "estimation round trip", c11_round_trip),
        (12, "single-model program", c12_single),
    ];
    let start = Instant::now();
    let mut red = Vec::new();
    for (n, name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                let note = if KNOWN_RED.contains(&n) {
                    " [known]"
                } else {
                    ""
                };
                println!("criterion {n:>2} FAIL{note}  {name}: {detail}");
                red.push(n);
            }
        }
    }
    println!("acceptance finished in {:.2?}", start.elapsed());
    if red == KNOWN_RED {
        ExitCode::SUCCESS
    } else {
        println!("unexpected result: failing criteria {red:?}, expected {KNOWN_RED:?}");
        ExitCode::FAILURE
    }
}
