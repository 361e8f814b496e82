//! Acceptance suite: every criterion runs over Q and GF(7) and prints one
//! line. Each line also carries the independent oracle checks for that
//! criterion, computed here with plain integer arithmetic.

use std::time::{Duration, Instant};

use reflexa_core::findual::{Model, RecursiveFunctional};
use reflexa_core::random::seed_from_env;
use reflexa_core::suite::{run_criterion, Status, SuiteOptions, CRITERIA};
use reflexa_core::tower::{completed_tensor, ps_invert, AlgebraTower};
use reflexa_core::{Field, Scalar};

const FIELDS: [Field; 2] = [Field::Rational, Field::Prime(7)];

fn ints(v: &[Scalar]) -> Vec<i128> {
    v.iter()
        .map(|s| {
            let r = s.as_rational().expect("rational");
            assert!(r.is_integer());
            r.numer().try_into().expect("fits")
        })
        .collect()
}

fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Squares of Fibonacci numbers: the fitted recurrence reproduces 20 terms,
/// and a nonzero 3x3 Hankel determinant rules out every recurrence of
/// degree at most 2.
fn fibonacci_square_oracle() -> bool {
    let mut fib = vec![0i128, 1];
    while fib.len() < 20 {
        let n = fib.len();
        fib.push(fib[n - 1] + fib[n - 2]);
    }
    let sq: Vec<i128> = fib.iter().map(|x| x * x).collect();
    let hankel = [[sq[0], sq[1], sq[2]], [sq[1], sq[2], sq[3]], [sq[2], sq[3], sq[4]]];
    if det3(hankel) == 0 {
        return false;
    }
    let f = RecursiveFunctional::fibonacci(Field::Rational, Model::Grouplike);
    let p = f.multiply(&f).expect("within bound");
    let a = ints(p.annihilator());
    let d = p.degree();
    d == 3 && (0..20 - d).all(|n| (0..=d).map(|i| a[i] * sq[n + i]).sum::<i128>() == 0)
}

/// `sum_k C(n, k) = 2^n` for the primitive product of `ones` with itself.
fn binomial_oracle() -> bool {
    let ones = RecursiveFunctional::ones(Field::Rational, Model::Primitive);
    let got = ints(&ones.multiply(&ones).expect("within bound").sequence(25));
    let mut row = vec![1i128];
    (0..25).all(|n| {
        let ok = got[n] == row.iter().sum::<i128>();
        let mut next = vec![1i128; n + 2];
        for k in 1..=n {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
        ok
    })
}

/// `(1 - x)^-1 = 1 + x + ... + x^9` and the completed tensor of two
/// power-series towers has as many basis monomials `x^i y^j`, `i, j <= n`,
/// as `(n + 1)^2`.
fn power_series_oracle() -> bool {
    let q = Field::Rational;
    let inv = ps_invert(&[q.one(), -q.one()], 10).expect("unit");
    if ints(&inv) != vec![1; 10] {
        return false;
    }
    let t = completed_tensor(&AlgebraTower::power_series(q, 5), &AlgebraTower::power_series(q, 5)).expect("towers");
    (0..=5).all(|n| {
        let monomials = (0..=n).flat_map(|i| (0..=n).map(move |j| (i, j))).count();
        t.algebras[n].dim() == monomials
    })
}

fn oracle(id: usize) -> Option<bool> {
    match id {
        10 => Some(fibonacci_square_oracle() && binomial_oracle()),
        11 => Some(power_series_oracle()),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let seed = seed_from_env();
    println!("acceptance seed {seed}");
    let mut failures = Vec::new();
    for c in &CRITERIA {
        let limit = Duration::from_secs(c.limit_secs);
        let mut parts = Vec::new();
        let mut ok = true;
        for field in FIELDS {
            let opts = SuiteOptions::new(field, seed);
            let start = Instant::now();
            let record = run_criterion(c, &opts);
            let elapsed = start.elapsed();
            let pass = record.status == Status::Pass && elapsed < limit;
            ok &= pass;
            parts.push(format!("{field} {} in {} ms ({})", record.status, elapsed.as_millis(), record.detail));
        }
        let extra = oracle(c.id);
        if let Some(o) = extra {
            ok &= o;
            parts.push(format!("oracle {}", if o { "ok" } else { "mismatch" }));
        }
        println!(
            "criterion {:>2} {:<20} {} [limit {} s] {}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            c.limit_secs,
            parts.join("; ")
        );
        if !ok {
            failures.push(c.name);
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
