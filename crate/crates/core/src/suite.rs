//! The verification suite: one check per criterion, each returning a record
//! with a formula anchor, a status and an optional counterexample.

use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adjunction::verify_adjunction;
use crate::algebra::{TestAlgebra, Universe};
use crate::bialgebra::{
    bialgebra_isomorphic, dual_bialgebra, fixture_morphisms, fixtures, function_bialgebra, group_bialgebra,
    is_bialgebra_morphism, transpose_bialgebra_morphism, GroupTable, FIXTURE_GROUPS,
};
use crate::error::{Error, Result};
use crate::findual::{from_prefix, Model, RecursiveFunctional};
use crate::functor::{FunctorOnUniverse, Nilradical, PresentedFunctor, QuasiCoherent, ZeroFunctor};
use crate::matrix::{kron_vec, unit_vector, Matrix, Vector};
use crate::module::{double_dual_unit, dual_map, FinModule};
use crate::nat::{
    check_d_proquasicoherent, check_reflexive, dual_on_universe, nat_hom_space, restriction_to_base, Family,
    DEFAULT_RANK_BOUND,
};
use crate::random;
use crate::scalar::Field;
use crate::tower::{
    completed_tensor, kernel_tower, product_decomposition, ps_invert, reflexivity_roundtrip, stabilized_images,
    AlgebraTower, Tower,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            status,
            detail: detail.into(),
            witness: None,
            reproducer: None,
            elapsed_ms: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub field: String,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    /// 0 when every record passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {} field {}\n", self.seed, self.field);
        for r in &self.records {
            out.push_str(&format!("[{}] {}: {} ({})", r.status, r.name, r.anchor, r.detail));
            if let Some(ms) = r.elapsed_ms {
                out.push_str(&format!(" {ms} ms"));
            }
            out.push('\n');
            if let Some(w) = &r.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
            if let Some(cmd) = &r.reproducer {
                out.push_str(&format!("  reproduce: {cmd}\n"));
            }
        }
        let passed = self.records.iter().filter(|r| r.status == Status::Pass).count();
        out.push_str(&format!("{} checks, {} passed\n", self.records.len(), passed));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `Q` or `GF:p`, as accepted on the command line.
pub fn field_flag(field: Field) -> String {
    match field {
        Field::Rational => "Q".into(),
        Field::Prime(p) => format!("GF:{p}"),
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub field: Field,
    pub seed: u64,
    pub universe: String,
    pub rank_bound: usize,
    pub depth: Option<usize>,
    pub timing: bool,
}

impl SuiteOptions {
    pub fn new(field: Field, seed: u64) -> Self {
        SuiteOptions {
            field,
            seed,
            universe: "reference".into(),
            rank_bound: DEFAULT_RANK_BOUND,
            depth: None,
            timing: false,
        }
    }

    fn rng(&self, salt: u64) -> random::Rng64 {
        random::rng(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// `reference`, `trivial`, or `reference+N` for the reference universe
/// enlarged by `K[x]/(x^N)`.
pub fn universe_by_name(name: &str, field: Field) -> Result<Universe> {
    match name {
        "reference" => Universe::reference(field),
        "trivial" => Ok(Universe::trivial(field)),
        _ => {
            let n = name
                .strip_prefix("reference+")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| (2..=6).contains(&n))
                .ok_or_else(|| Error::Precondition(format!("unknown universe {name:?}")))?;
            Universe::reference(field)?.enlarge(n)
        }
    }
}

pub struct Outcome {
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Value>,
}

impl Outcome {
    fn check(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
            witness: None,
        }
    }

    fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }
}

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub anchor: &'static str,
    /// Wall-clock limit in seconds on an optimized build.
    pub limit_secs: u64,
    pub run: fn(&SuiteOptions) -> Result<Outcome>,
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        name: "double-dual",
        anchor: "M** = M",
        limit_secs: 5,
        run: double_dual,
    },
    Criterion {
        id: 2,
        name: "hom-tensor",
        anchor: "Hom(M*, N) = M (x) N",
        limit_secs: 60,
        run: hom_tensor,
    },
    Criterion {
        id: 3,
        name: "qc-hom",
        anchor: "Hom_R(M, N(R)) = Hom(M, N)",
        limit_secs: 30,
        run: qc_hom,
    },
    Criterion {
        id: 4,
        name: "adjunction",
        anchor: "Hom_S(i*M, N) = Hom_R(M, i_*N)",
        limit_secs: 30,
        run: adjunction,
    },
    Criterion {
        id: 5,
        name: "d-proquasicoherent",
        anchor: "M* -> M(R)* injective",
        limit_secs: 30,
        run: d_proquasicoherent,
    },
    Criterion {
        id: 6,
        name: "towers",
        anchor: "lim M_n = prod H_n, M* = colim M_n*",
        limit_secs: 30,
        run: towers,
    },
    Criterion {
        id: 7,
        name: "kernel-tower",
        anchor: "P = Ker f + K v",
        limit_secs: 30,
        run: kernels,
    },
    Criterion {
        id: 8,
        name: "bialgebra-duality",
        anchor: "B -> B* anti-equivalence",
        limit_secs: 30,
        run: bialgebra_duality,
    },
    Criterion {
        id: 9,
        name: "transpose",
        anchor: "Hom(A, B*) = Hom(B, A*)",
        limit_secs: 30,
        run: transpose,
    },
    Criterion {
        id: 10,
        name: "finite-dual",
        anchor: "(lambda mu)(a) = (lambda (x) mu)(Delta a)",
        limit_secs: 30,
        run: finite_dual,
    },
    Criterion {
        id: 11,
        name: "power-series",
        anchor: "B = lim A/I^n",
        limit_secs: 30,
        run: power_series,
    },
];

/// `all`, a criterion name, or its number.
pub fn select(suite: &str) -> Result<Vec<&'static Criterion>> {
    if suite == "all" {
        return Ok(CRITERIA.iter().collect());
    }
    CRITERIA
        .iter()
        .find(|c| c.name == suite || c.id.to_string() == suite)
        .map(|c| vec![c])
        .ok_or_else(|| Error::Precondition(format!("unknown suite {suite:?}")))
}

pub fn run_criterion(c: &Criterion, opts: &SuiteOptions) -> CheckRecord {
    let start = Instant::now();
    let outcome = (c.run)(opts);
    let elapsed = start.elapsed().as_millis() as u64;
    let (status, detail, witness) = match outcome {
        Ok(o) => (if o.passed { Status::Pass } else { Status::Fail }, o.detail, o.witness),
        Err(e) => (Status::Fail, format!("error: {e}"), None),
    };
    let mut r = CheckRecord::new(c.name, c.anchor, status, detail);
    r.witness = witness;
    if status != Status::Pass {
        r.reproducer = Some(format!(
            "REFLEXA_SEED={} reflexa report --suite {} --field {}",
            opts.seed,
            c.name,
            field_flag(opts.field)
        ));
    }
    if opts.timing {
        r.elapsed_ms = Some(elapsed);
    }
    r
}

/// Runs the selected criteria in order.
pub fn run_suite(suite: &str, opts: &SuiteOptions) -> Result<Report> {
    let records = select(suite)?.into_iter().map(|c| run_criterion(c, opts)).collect();
    Ok(Report {
        seed: opts.seed,
        field: field_flag(opts.field),
        records,
    })
}

fn universe(opts: &SuiteOptions) -> Result<Arc<Universe>> {
    Ok(Arc::new(universe_by_name(&opts.universe, opts.field)?))
}

fn double_dual(opts: &SuiteOptions) -> Result<Outcome> {
    let field = opts.field;
    let mut rng = opts.rng(1);
    for trial in 0..200 {
        let m = FinModule::new(field, rng.gen_range(0..=8));
        let n = FinModule::new(field, rng.gen_range(0..=8));
        let f = random::linear_map(&mut rng, &m, &n);
        let um = double_dual_unit(&m).matrix;
        let un = double_dual_unit(&n).matrix;
        if !um.is_identity() || !un.is_identity() {
            return Ok(Outcome::check(false, format!("unit is not the identity in trial {trial}")));
        }
        let ff = dual_map(&dual_map(&f)).matrix;
        if un.mul(&f.matrix)? != ff.mul(&um)? {
            return Ok(Outcome::check(false, format!("naturality square fails in trial {trial}"))
                .with_witness(json!({ "map": f.matrix.entries() })));
        }
    }
    let u = universe(opts)?;
    for r in 0..=2 {
        let v = check_reflexive(&FunctorOnUniverse::quasicoherent(&FinModule::new(field, r), &u)?)?;
        if !v.reflexive {
            return Ok(Outcome::check(false, format!("quasi-coherent rank {r} is not reflexive on the universe"))
                .with_witness(serde_json::to_value(&v.witness).expect("serializable")));
        }
    }
    Ok(Outcome::check(true, "200 random maps, ranks <= 8; quasi-coherent ranks 0..2 on the universe"))
}

/// `m (x) n |-> (w |-> n (x) w_K(m))` in the coordinates of the solved
/// spaces of `M*` and of `Hom(M*, N)`.
pub fn canonical_embedding(u: &Arc<Universe>, m: usize, n: usize) -> Result<(usize, Matrix)> {
    let field = u.field();
    let dual = dual_on_universe(&FunctorOnUniverse::quasicoherent(&FinModule::new(field, m), u)?)?;
    let target = FunctorOnUniverse::quasicoherent(&FinModule::new(field, n), u)?;
    let space = nat_hom_space(&dual.functor, &target)?;
    let mut cols = Vec::with_capacity(m * n);
    for i in 0..m {
        for j in 0..n {
            let y = unit_vector(field, n, j);
            let family: Family = u
                .algebras()
                .iter()
                .enumerate()
                .map(|(r, alg)| {
                    let images: Vec<Vector> = dual.spaces[r]
                        .basis()
                        .iter()
                        .map(|w| Ok(kron_vec(&y, &w[0].column(i))))
                        .collect::<Result<_>>()?;
                    if images.is_empty() {
                        Ok(Matrix::zeros(field, n * alg.dim(), 0))
                    } else {
                        Matrix::from_columns(field, n * alg.dim(), &images)
                    }
                })
                .collect::<Result<_>>()?;
            let c = space
                .coordinates(&family)?
                .ok_or_else(|| Error::Invariant("canonical family is not natural".into()))?;
            cols.push(c);
        }
    }
    let embedding = if cols.is_empty() {
        Matrix::zeros(field, space.dim(), 0)
    } else {
        Matrix::from_columns(field, space.dim(), &cols)?
    };
    Ok((space.dim(), embedding))
}

fn hom_tensor(opts: &SuiteOptions) -> Result<Outcome> {
    let u = universe(opts)?;
    for m in 1..=4 {
        for n in 1..=4 {
            let (dim, e) = canonical_embedding(&u, m, n)?;
            if dim != m * n || !e.is_invertible() {
                return Ok(Outcome::check(false, format!("ranks ({m}, {n}): dimension {dim}, embedding rank {}", e.rank()))
                    .with_witness(json!({ "m": m, "n": n, "dim": dim })));
            }
        }
    }
    Ok(Outcome::check(true, "16 rank pairs up to 4 x 4, dimension m n, embedding bijective"))
}

fn qc_hom(opts: &SuiteOptions) -> Result<Outcome> {
    let u = universe(opts)?;
    let field = opts.field;
    let mut rng = opts.rng(3);
    for trial in 0..50 {
        let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let f = FunctorOnUniverse::quasicoherent(&FinModule::new(field, a), &u)?;
        let g = FunctorOnUniverse::quasicoherent(&FinModule::new(field, b), &u)?;
        let space = nat_hom_space(&f, &g)?;
        let r = restriction_to_base(&space)?;
        if space.dim() != a * b || r.rank() != a * b {
            return Ok(Outcome::check(false, format!("trial {trial}: ranks ({a}, {b}), solved dimension {}", space.dim()))
                .with_witness(json!({ "source": a, "target": b, "dim": space.dim(), "restriction_rank": r.rank() })));
        }
    }
    Ok(Outcome::check(true, "50 random pairs, restriction to K bijective"))
}

fn adjunction(opts: &SuiteOptions) -> Result<Outcome> {
    let field = opts.field;
    let u = universe(opts)?;
    let s = TestAlgebra::truncated_polynomial(field, 2)?;
    let targets: Vec<(String, Box<dyn PresentedFunctor>)> = vec![
        ("rank 1".into(), Box::new(QuasiCoherent::of_rank(field, 1))),
        ("rank 2".into(), Box::new(QuasiCoherent::of_rank(field, 2))),
        ("zero".into(), Box::new(ZeroFunctor { field })),
        ("nilradical".into(), Box::new(Nilradical { field })),
    ];
    let mut cases = 0;
    for r in 1..=2 {
        let f = QuasiCoherent::of_rank(field, r);
        for (name, g) in &targets {
            let v = verify_adjunction(&u, &s, &f, g.as_ref())?;
            cases += 1;
            if !v.holds {
                return Ok(Outcome::check(false, format!("source rank {r}, target {name}"))
                    .with_witness(serde_json::to_value(&v).expect("serializable")));
            }
        }
    }
    Ok(Outcome::check(true, format!("S = K[x]/(x^2), {cases} source/target pairs, both composites identity")))
}

fn d_proquasicoherent(opts: &SuiteOptions) -> Result<Outcome> {
    let u = universe(opts)?;
    let field = opts.field;
    for r in 0..=3 {
        let v = check_d_proquasicoherent(&FunctorOnUniverse::quasicoherent(&FinModule::new(field, r), &u)?, opts.rank_bound)?;
        if !v.passes {
            return Ok(Outcome::check(false, format!("quasi-coherent rank {r} fails"))
                .with_witness(serde_json::to_value(&v.witness).expect("serializable")));
        }
    }
    let nil = Nilradical { field }.on_universe(&u)?;
    let v = check_d_proquasicoherent(&nil, opts.rank_bound)?;
    let witness = serde_json::to_value(&v.witness).expect("serializable");
    if v.passes {
        return Ok(Outcome::check(false, "nilradical functor was not rejected"));
    }
    Ok(Outcome::check(true, "quasi-coherent ranks 0..3 pass; nilradical fails").with_witness(witness))
}

fn towers(opts: &SuiteOptions) -> Result<Outcome> {
    let mut rng = opts.rng(6);
    for trial in 0..100 {
        let t = random::tower(&mut rng, opts.field, 6, 5);
        let s = stabilized_images(&t)?.tower;
        let d = product_decomposition(&s)?;
        for k in 0..=s.depth() {
            let total: usize = d.dims[..=k].iter().sum();
            if total != s.rank(k) {
                return Ok(Outcome::check(false, format!("trial {trial}: dimensions at level {k}"))
                    .with_witness(json!({ "ranks": s.ranks(), "dims": d.dims })));
            }
        }
        for n in 0..s.depth() {
            let truncated = d.isos[n].hstack(&Matrix::zeros(opts.field, s.rank(n), d.dims[n + 1]))?;
            if s.map(n).mul(&d.isos[n + 1])? != truncated {
                return Ok(Outcome::check(false, format!("trial {trial}: splitting at level {n}")));
            }
        }
        if !reflexivity_roundtrip(&s)? {
            return Ok(Outcome::check(false, format!("trial {trial}: dual of dual differs")));
        }
    }
    Ok(Outcome::check(true, "100 random towers, length <= 6, dims <= 5"))
}

/// A compatible functional obtained by pulling back a nonzero one from the
/// first level with nonzero rank.
fn compatible_functional(rng: &mut impl Rng, t: &Tower) -> Result<Vec<Vector>> {
    let field = t.field();
    let mut f = vec![random::vector(rng, field, t.rank(0))];
    if f[0].iter().all(|x| x.is_zero()) && t.rank(0) > 0 {
        f[0][0] = field.one();
    }
    for n in 0..t.depth() {
        let next = t.map(n).transpose().mul_vec(&f[n])?;
        f.push(next);
    }
    Ok(f)
}

fn check_kernel(t: &Tower, f: &[Vector]) -> Result<bool> {
    let k = kernel_tower(t, f)?;
    if k.v.is_none() {
        return Ok(f.iter().all(|r| r.iter().all(|x| x.is_zero())));
    }
    for n in 0..t.levels().len() {
        let row = Matrix::new(t.field(), 1, t.rank(n), f[n].clone())?;
        let ker = row.kernel_basis();
        if ker.len() + 1 != t.rank(n) || k.quotient.rank(n) != ker.len() {
            return Ok(false);
        }
        if !ker.is_empty() && !k.projections[n].mul(&Matrix::from_columns(t.field(), t.rank(n), &ker)?)?.is_invertible() {
            return Ok(false);
        }
    }
    Ok(k.split.iter().all(|&b| b))
}

fn kernels(opts: &SuiteOptions) -> Result<Outcome> {
    let field = opts.field;
    let depth = opts.depth.unwrap_or(8);
    let ps = Tower::power_series(field, depth);
    // The coefficient of x^0, pulled back to every level.
    let f: Vec<Vector> = (0..=depth).map(|n| unit_vector(field, n + 1, 0)).collect();
    if !check_kernel(&ps, &f)? {
        return Ok(Outcome::check(false, format!("power-series tower of depth {depth}")));
    }
    let mut rng = opts.rng(7);
    let mut tried = 0;
    while tried < 50 {
        let t = random::surjective_tower(&mut rng, field, 6, 5);
        if t.rank(0) == 0 {
            continue;
        }
        tried += 1;
        let f = compatible_functional(&mut rng, &t)?;
        if !check_kernel(&t, &f)? {
            return Ok(Outcome::check(false, format!("random tower {tried}")).with_witness(json!({ "ranks": t.ranks() })));
        }
    }
    Ok(Outcome::check(true, format!("power series depth {depth} and 50 random towers split levelwise")))
}

fn bialgebra_duality(opts: &SuiteOptions) -> Result<Outcome> {
    let field = opts.field;
    for fx in fixtures(field)?.iter().filter(|f| f.applies_to(field)) {
        let d = dual_bialgebra(&fx.bialgebra)?;
        d.validate()?;
        let dd = dual_bialgebra(&d)?;
        if bialgebra_isomorphic(&dd, &fx.bialgebra)?.is_none() {
            return Ok(Outcome::check(false, format!("double dual of {} not recognized", fx.name)));
        }
    }
    for name in FIXTURE_GROUPS {
        let g = GroupTable::by_name(name).expect("built-in");
        let d = dual_bialgebra(&group_bialgebra(field, &g)?)?;
        let kg = function_bialgebra(field, &g)?;
        if bialgebra_isomorphic(&d, &kg)?.is_none() {
            return Ok(Outcome::check(false, format!("K[{name}]* and K^{name} not matched")));
        }
    }
    let mut rng = opts.rng(8);
    for trial in 0..20 {
        let b = random::bialgebra(&mut rng, field, 4)?;
        if dual_bialgebra(&dual_bialgebra(&b)?)? != b {
            return Ok(Outcome::check(false, format!("random bialgebra {trial}: double dual differs")));
        }
    }
    Ok(Outcome::check(true, "9 fixtures and 20 random bialgebras; K[G]* = K^G for Z2, Z3, Z2xZ2, S3"))
}

fn transpose(opts: &SuiteOptions) -> Result<Outcome> {
    let field = opts.field;
    let mut count = 0;
    for m in fixture_morphisms(field)? {
        if m.gate.is_some_and(|n| !field.is_invertible(n as i64)) {
            continue;
        }
        let bd = dual_bialgebra(&m.target)?;
        if !is_bialgebra_morphism(&m.source, &bd, &m.map)? {
            continue;
        }
        let t = transpose_bialgebra_morphism(&m.source, &m.target, &m.map)?;
        let back = transpose_bialgebra_morphism(&m.target, &m.source, &t)?;
        if back != m.map {
            return Ok(Outcome::check(false, format!("{}: double transpose differs", m.name)));
        }
        count += 1;
    }
    Ok(Outcome::check(count > 0, format!("{count} verified fixture morphisms transpose and transpose back")))
}

fn finite_dual(opts: &SuiteOptions) -> Result<Outcome> {
    let field = opts.field;
    let g = Model::Grouplike;
    let p = Model::Primitive;
    let (r, s) = (field.from_i64(2), field.from_i64(3));
    let prod = RecursiveFunctional::geometric(field, g, r.clone())?.multiply(&RecursiveFunctional::geometric(field, g, s.clone())?)?;
    if prod != RecursiveFunctional::geometric(field, g, &r * &s)?.minimize() {
        return Ok(Outcome::check(false, "geometric(2) geometric(3) != geometric(6)"));
    }
    let ones = RecursiveFunctional::ones(field, p);
    if ones.multiply(&ones)? != RecursiveFunctional::geometric(field, p, field.from_i64(2))?.minimize() {
        return Ok(Outcome::check(false, "ones ones != 2^n in the primitive model"));
    }
    let fib = RecursiveFunctional::fibonacci(field, g);
    let sq = fib.multiply(&fib)?;
    let direct: Vector = fib.sequence(20).iter().map(|x| x * x).collect();
    let oracle = from_prefix(field, g, &direct, 4)?;
    if sq.degree() > 4 || oracle.as_ref() != Some(&sq) || sq.sequence(20) != direct {
        return Ok(Outcome::check(false, "Fibonacci squared").with_witness(json!({ "product": sq })));
    }
    let mut rng = opts.rng(10);
    for trial in 0..500 {
        let model = if trial % 2 == 0 { g } else { p };
        let a = random::functional(&mut rng, field, model, 4);
        let b = random::functional(&mut rng, field, model, 4);
        match a.multiply(&b) {
            Ok(c) if c.degree() <= a.degree() * b.degree() => {}
            Ok(_) | Err(Error::BoundExceeded { .. }) => {
                return Ok(Outcome::check(false, format!("product {trial} exceeds the degree bound"))
                    .with_witness(json!({ "left": a, "right": b })));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome::check(true, format!("Fibonacci squared has degree {}; 500 random products within d1 d2", sq.degree())))
}

fn power_series(opts: &SuiteOptions) -> Result<Outcome> {
    let field = opts.field;
    let depth = opts.depth.unwrap_or(10);
    let inv = ps_invert(&[field.one(), -field.one()], depth)?;
    if inv.iter().any(|c| !c.is_one()) {
        return Ok(Outcome::check(false, "inverse of 1 - x is not the geometric series"));
    }
    let levels = depth.min(6);
    let t = completed_tensor(&AlgebraTower::power_series(field, levels - 1), &AlgebraTower::power_series(field, levels - 1))?;
    t.validate()?;
    let dims: Vec<usize> = t.algebras.iter().map(|a| a.dim()).collect();
    let expect: Vec<usize> = (1..=levels).map(|n| n * n).collect();
    if dims != expect {
        return Ok(Outcome::check(false, "completed tensor dimensions").with_witness(json!({ "dims": dims })));
    }
    Ok(Outcome::check(true, format!("1/(1 - x) to {depth} terms; completed tensor dims {dims:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert_eq!(select("all").unwrap().len(), 11);
        assert_eq!(select("7").unwrap()[0].name, "kernel-tower");
        assert!(select("nope").is_err());
    }

    #[test]
    fn universes_by_name() {
        assert_eq!(universe_by_name("trivial", Field::Rational).unwrap().len(), 1);
        assert!(universe_by_name("reference+4", Field::Rational).unwrap().len() > 5);
        assert!(universe_by_name("bogus", Field::Rational).is_err());
    }

    #[test]
    fn empty_report() {
        let r = Report {
            seed: 1,
            field: "Q".into(),
            records: vec![],
        };
        assert!(r.to_text().ends_with("0 checks, 0 passed\n"));
        assert_eq!(r.exit_code(), 0);
    }
}
