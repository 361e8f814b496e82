use std::sync::Arc;

use rayon::prelude::*;
use reflexa_core::bialgebra::{bialgebra_isomorphic, dual_bialgebra, transpose_bialgebra_morphism};
use reflexa_core::findual::from_prefix;
use reflexa_core::module::{double_dual_unit, dual_map, dual_module, hom_module, snake, LinearMap};
use reflexa_core::nat::{check_d_proquasicoherent, check_reflexive, nat_hom_space, restriction_to_base};
use reflexa_core::random::seed_from_env;
use reflexa_core::suite::{
    canonical_embedding, field_flag, run_criterion, select, universe_by_name, CheckRecord, Report, Status,
    SuiteOptions,
};
use reflexa_core::tower::{dual_tower, kernel_tower, product_decomposition, reflexivity_roundtrip, stabilized_images};
use reflexa_core::{FinModule, FunctorOnUniverse, Matrix, Universe};
use serde::Serialize;
use serde_json::json;

use crate::input::{self, check_field, CliError, CliResult};
use crate::{BialgAction, CheckKind, Cli, DualKind, FindualAction, Format, TowerAction, Verb};

pub struct Output {
    pub text: String,
    pub code: u8,
}

/// Above this rank the universe-level checks of `check module` are skipped.
const UNIVERSE_RANK_LIMIT: usize = 4;

fn emit<T: Serialize>(value: &T) -> CliResult<Output> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    Ok(Output { text, code: 0 })
}

fn emit_report(cli: &Cli, mut report: Report) -> CliResult<Output> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    for r in report.records.iter_mut().filter(|r| r.status != Status::Pass && r.reproducer.is_none()) {
        r.reproducer = Some(format!("REFLEXA_SEED={} reflexa {}", report.seed, args.join(" ")));
    }
    let text = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    Ok(Output {
        text,
        code: report.exit_code() as u8,
    })
}

fn report(cli: &Cli, records: Vec<CheckRecord>) -> Report {
    Report {
        seed: seed_from_env(),
        field: field_flag(cli.field),
        records,
    }
}

fn record(name: &str, anchor: &str, ok: bool, detail: impl Into<String>) -> CheckRecord {
    CheckRecord::new(name, anchor, if ok { Status::Pass } else { Status::Fail }, detail)
}

fn universe(cli: &Cli) -> CliResult<Arc<Universe>> {
    Ok(Arc::new(universe_by_name(&cli.universe, cli.field)?))
}

fn module(cli: &Cli, path: &str) -> CliResult<FinModule> {
    let m: FinModule = input::load(path)?;
    check_field(path, m.field, cli.field)?;
    Ok(m)
}

fn linear_map(cli: &Cli, path: &str) -> CliResult<LinearMap> {
    let f: LinearMap = input::load(path)?;
    check_field(path, f.field(), cli.field)?;
    Ok(f)
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.verb {
        Verb::Check { kind, input } => check(cli, *kind, input),
        Verb::Dual { kind, input } => dual(cli, *kind, input),
        Verb::Hom { source, target } => hom(cli, source, target),
        Verb::Tower {
            action,
            input,
            functional,
        } => tower(cli, *action, input, functional.as_deref()),
        Verb::Bialg { action, inputs } => bialg(cli, *action, inputs),
        Verb::Findual { action, inputs } => findual(cli, *action, inputs),
        Verb::Report { suite } => run_report(cli, suite),
    }
}

fn check(cli: &Cli, kind: CheckKind, path: &str) -> CliResult<Output> {
    let mut records = Vec::new();
    match kind {
        CheckKind::Module => {
            let m = module(cli, path)?;
            let unit = double_dual_unit(&m).matrix;
            records.push(record("double-dual", "M** = M", unit.is_identity(), format!("rank {}", m.rank)));
            let ok = snake(&m)?.matrix.is_identity();
            records.push(record("snake", "(id (x) ev)(coev (x) id) = id", ok, format!("rank {}", m.rank)));
            if m.rank <= UNIVERSE_RANK_LIMIT {
                let u = universe(cli)?;
                let f = FunctorOnUniverse::quasicoherent(&m, &u)?;
                let v = check_reflexive(&f)?;
                let mut r = record(
                    "double-dual-universe",
                    "M** = M",
                    v.reflexive,
                    format!("{} algebras in {}", u.len(), cli.universe),
                );
                r.witness = v.witness.map(|w| serde_json::to_value(w).expect("serializable"));
                records.push(r);
                let d = check_d_proquasicoherent(&f, cli.rank_bound)?;
                let mut r = record(
                    "d-proquasicoherent",
                    "M* -> M(R)* injective",
                    d.passes,
                    format!("target ranks 1..{}", cli.rank_bound),
                );
                r.witness = d.witness.map(|w| serde_json::to_value(w).expect("serializable"));
                records.push(r);
            } else {
                records.push(CheckRecord::new(
                    "double-dual-universe",
                    "M** = M",
                    Status::Unknown,
                    format!("rank {} above the universe limit {UNIVERSE_RANK_LIMIT}", m.rank),
                ));
            }
        }
        CheckKind::Map => {
            let f = linear_map(cli, path)?;
            let ff = dual_map(&dual_map(&f));
            let lhs = double_dual_unit(&f.codomain).matrix.mul(&f.matrix)?;
            let rhs = ff.matrix.mul(&double_dual_unit(&f.domain).matrix)?;
            records.push(record(
                "double-dual-natural",
                "M** = M",
                lhs == rhs,
                format!("{} x {}", f.codomain.rank, f.domain.rank),
            ));
        }
        CheckKind::Tower => {
            let t = input::tower(path, cli.field, cli.depth.unwrap_or(4))?;
            let s = stabilized_images(&t)?;
            let again = stabilized_images(&s.tower)?;
            records.push(record(
                "stabilization",
                "lim M_n = lim M'_n",
                s.tower.is_surjective() && again.tower == s.tower,
                format!("ranks {:?} -> {:?}", t.ranks(), s.tower.ranks()),
            ));
            let d = product_decomposition(&s.tower)?;
            let sums: Vec<usize> = (0..d.dims.len()).map(|k| d.dims[..=k].iter().sum()).collect();
            records.push(record(
                "product-decomposition",
                "lim M_n = prod H_n",
                sums == s.tower.ranks(),
                format!("dim H = {:?}", d.dims),
            ));
            records.push(record(
                "tower-duality",
                "M* = colim M_n*",
                reflexivity_roundtrip(&s.tower)? && dual_tower(&s.tower)?.is_injective(),
                format!("depth {}", s.tower.depth()),
            ));
        }
        CheckKind::Bialgebra => {
            let b = input::bialgebra(path, cli.field)?;
            records.push(record("bialgebra-axioms", "B bialgebra", b.validate().is_ok(), format!("dim {}", b.dim())));
            let d = dual_bialgebra(&b)?;
            records.push(record(
                "dual-involution",
                "B -> B* anti-equivalence",
                dual_bialgebra(&d)? == b,
                format!("dim {}", b.dim()),
            ));
            records.push(record(
                "dual-swaps-commutativity",
                "B -> B* anti-equivalence",
                d.is_commutative() == b.is_cocommutative() && d.is_cocommutative() == b.is_commutative(),
                format!("commutative {}, cocommutative {}", b.is_commutative(), b.is_cocommutative()),
            ));
        }
    }
    emit_report(cli, report(cli, records))
}

fn dual(cli: &Cli, kind: DualKind, path: &str) -> CliResult<Output> {
    match kind {
        DualKind::Module => emit(&dual_module(&module(cli, path)?)),
        DualKind::Map => emit(&dual_map(&linear_map(cli, path)?)),
        DualKind::Tower => {
            let t = input::tower(path, cli.field, cli.depth.unwrap_or(4))?;
            emit(&dual_tower(&stabilized_images(&t)?.tower)?)
        }
        DualKind::Bialgebra => emit(&dual_bialgebra(&input::bialgebra(path, cli.field)?)?),
    }
}

fn hom(cli: &Cli, source: &str, target: &str) -> CliResult<Output> {
    let m = module(cli, source)?;
    let n = module(cli, target)?;
    let mut records = vec![record(
        "hom-rank",
        "Hom(M, N) = M* (x) N",
        hom_module(&m, &n)?.rank == m.rank * n.rank,
        format!("{} x {}", m.rank, n.rank),
    )];
    if m.rank.max(n.rank) <= UNIVERSE_RANK_LIMIT {
        let u = universe(cli)?;
        let space = nat_hom_space(
            &FunctorOnUniverse::quasicoherent(&m, &u)?,
            &FunctorOnUniverse::quasicoherent(&n, &u)?,
        )?;
        let r = restriction_to_base(&space)?;
        records.push(record(
            "qc-hom",
            "Hom_R(M, N(R)) = Hom(M, N)",
            space.dim() == m.rank * n.rank && r.rank() == space.dim(),
            format!("solved dimension {}", space.dim()),
        ));
        let (dim, e) = canonical_embedding(&u, m.rank, n.rank)?;
        records.push(record(
            "hom-tensor",
            "Hom(M*, N) = M (x) N",
            dim == m.rank * n.rank && e.is_invertible(),
            format!("solved dimension {dim}"),
        ));
    }
    emit_report(cli, report(cli, records))
}

fn tower(cli: &Cli, action: TowerAction, path: &str, functional: Option<&str>) -> CliResult<Output> {
    let t = input::tower(path, cli.field, cli.depth.unwrap_or(4))?;
    match action {
        TowerAction::Stabilize => emit(&stabilized_images(&t)?.tower),
        TowerAction::Decompose => {
            let s = stabilized_images(&t)?.tower;
            let d = product_decomposition(&s)?;
            emit(&json!({ "ranks": s.ranks(), "dims": d.dims, "kernels": d.kernels }))
        }
        TowerAction::Dual => emit(&dual_tower(&stabilized_images(&t)?.tower)?),
        TowerAction::Kernel => {
            let f = functional.ok_or_else(|| CliError::Usage("tower kernel needs a functional file".into()))?;
            let rows = input::vectors(f, cli.field)?;
            let k = kernel_tower(&t, &rows)?;
            emit(&json!({
                "quotient": k.quotient,
                "v": k.v.map(|v| v.coords),
                "split": k.split,
            }))
        }
    }
}

fn bialg(cli: &Cli, action: BialgAction, inputs: &[String]) -> CliResult<Output> {
    let need = |n: usize| -> CliResult<()> {
        if inputs.len() == n {
            Ok(())
        } else {
            Err(CliError::Usage(format!("expected {n} inputs, got {}", inputs.len())))
        }
    };
    match action {
        BialgAction::Show => {
            need(1)?;
            emit(&input::bialgebra(&inputs[0], cli.field)?)
        }
        BialgAction::Dual => {
            need(1)?;
            emit(&dual_bialgebra(&input::bialgebra(&inputs[0], cli.field)?)?)
        }
        BialgAction::Check => {
            need(1)?;
            check(cli, CheckKind::Bialgebra, &inputs[0])
        }
        BialgAction::Iso => {
            need(2)?;
            let a = input::bialgebra(&inputs[0], cli.field)?;
            let b = input::bialgebra(&inputs[1], cli.field)?;
            let found = bialgebra_isomorphic(&a, &b)?;
            let mut r = match &found {
                Some(_) => record("bialgebra-iso", "A = B", true, format!("dim {}", a.dim())),
                None => CheckRecord::new("bialgebra-iso", "A = B", Status::Unknown, "no isomorphism found"),
            };
            r.witness = found.map(|m| serde_json::to_value(m).expect("serializable"));
            emit_report(cli, report(cli, vec![r]))
        }
        BialgAction::Transpose => {
            need(3)?;
            let a = input::bialgebra(&inputs[0], cli.field)?;
            let b = input::bialgebra(&inputs[1], cli.field)?;
            let f: Matrix = input::load(&inputs[2])?;
            let f = if f.field() == cli.field {
                f
            } else {
                check_field(&inputs[2], f.field(), reflexa_core::Field::Rational)?;
                f.into_field(cli.field)?
            };
            emit(&transpose_bialgebra_morphism(&a, &b, &f)?)
        }
    }
}

fn findual(cli: &Cli, action: FindualAction, inputs: &[String]) -> CliResult<Output> {
    let field = cli.field;
    let two = || -> CliResult<_> {
        match inputs {
            [a, b] => Ok((input::functional(a, field)?, input::functional(b, field)?)),
            _ => Err(CliError::Usage(format!("expected 2 inputs, got {}", inputs.len()))),
        }
    };
    let one = || -> CliResult<_> {
        match inputs {
            [a] => Ok(a.as_str()),
            _ => Err(CliError::Usage(format!("expected 1 input, got {}", inputs.len()))),
        }
    };
    match action {
        FindualAction::Eval => {
            let r = input::functional(one()?, field)?;
            emit(&r.sequence(cli.depth.unwrap_or(10) + 1))
        }
        FindualAction::Add => {
            let (a, b) = two()?;
            emit(&a.add(&b)?)
        }
        FindualAction::Mul => {
            let (a, b) = two()?;
            emit(&a.multiply(&b)?)
        }
        FindualAction::Min => emit(&input::functional(one()?, field)?.minimize()),
        FindualAction::Fit => {
            let prefix = input::scalars(one()?, field)?;
            let model = reflexa_core::Model::Grouplike;
            match from_prefix(field, model, &prefix, cli.depth.unwrap_or(4))? {
                Some(r) => emit(&r),
                None => emit(&serde_json::Value::Null),
            }
        }
    }
}

fn run_report(cli: &Cli, suite: &str) -> CliResult<Output> {
    let criteria = select(suite)?;
    let opts = SuiteOptions {
        field: cli.field,
        seed: seed_from_env(),
        universe: cli.universe.clone(),
        rank_bound: cli.rank_bound,
        depth: cli.depth,
        timing: cli.timing,
    };
    let records: Vec<CheckRecord> = criteria.par_iter().map(|c| run_criterion(c, &opts)).collect();
    emit_report(
        cli,
        Report {
            seed: opts.seed,
            field: field_flag(cli.field),
            records,
        },
    )
}
