use vmv_core::corekit::rat;
use vmv_core::exppair::{eval_word, process_a, ExponentPair, ProcessWord};
use vmv_core::meanvalue::jsl_count;
use vmv_core::zetabounds::{
    breakpoint_ratio, kappa_digits, verification_battery, Check, DEFAULT_K_MAX,
};

use crate::commands::{checks_report, eval_text};
use crate::output::Report;

fn check(name: &str, ok: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        ok,
        detail: if ok { String::new() } else { detail },
    }
}

fn word_check(word: &str, p: (i64, i64), q: (i64, i64)) -> Check {
    let expect =
        ExponentPair::new(rat(p.0, p.1), rat(q.0, q.1)).expect("reference pair is admissible");
    let got = ProcessWord::parse(word).map(|w| eval_word(&w, &ExponentPair::trivial()));
    let ok = got.as_ref().is_ok_and(|g| g == &expect);
    check(
        &format!("{word}(0,1) = {expect}"),
        ok,
        format!("got {got:?}"),
    )
}

/// Published reference values, a few hand-checked counts, then the exact battery.
pub fn run() -> Report {
    let mut checks = Vec::new();
    let half = ExponentPair::new(rat(1, 2), rat(1, 2)).expect("admissible");
    let a = process_a(&half);
    checks.push(check(
        "A(1/2,1/2) = 1/6 2/3",
        a == ExponentPair::new(rat(1, 6), rat(2, 3)).expect("admissible"),
        format!("got {a}"),
    ));
    checks.push(word_check("AABAAB", (1, 20), (33, 40)));
    checks.push(word_check("ABAAB", (1, 9), (13, 18)));
    checks.push(word_check("AB", (1, 6), (2, 3)));
    let text = eval_text("AABAAB", "0 1");
    checks.push(check(
        "exppair eval AABAAB prints 1/20 33/40",
        text.as_deref() == Ok("1/20 33/40"),
        format!("got {text:?}"),
    ));
    let kappa = kappa_digits(40);
    checks.push(check(
        "kappa = 0.4918...",
        kappa.starts_with("0.4918"),
        kappa.clone(),
    ));
    let r5 = breakpoint_ratio(5);
    checks.push(check(
        "(k^2+1)^2/(k(k+1)^3) = 169/270 at k=5",
        r5 == rat(169, 270),
        r5.to_string(),
    ));
    let j = jsl_count(2, 1, 3).map(|r| r.count.to_string());
    checks.push(check(
        "J_{2,1}(3) = 19",
        j.as_deref() == Ok("19"),
        format!("got {j:?}"),
    ));
    match verification_battery(DEFAULT_K_MAX) {
        Ok(battery) => checks.extend(battery),
        Err(e) => checks.push(check("exact battery", false, e.to_string())),
    }
    checks_report("selftest", checks)
}
