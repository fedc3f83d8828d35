use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::json;

use mobjlab::io::{
    fixture_quantale, FunctorFile, MonoidFile, OrdGrpFile, QuantaleRef, RelationFile, SpanFile, VCatFile,
};
use mobjlab::mcheck::{
    build_counterexample, comparison_is_regular_mono, maltsev_object_verdict, DiagramManifest, DoubleSplitEpi,
    MaltsevVerdict,
};
use mobjlab::monoid::{inverse_from_witness, is_group, verify_monoid, wmaltsev_monoid, witness_search, WordWitness};
use mobjlab::ordgrp::{maltsev_object_ordgrp, wmaltsev_ordgrp_abelian};
use mobjlab::quantale::{cartesian_witness, verify_quantale, Quantale};
use mobjlab::rel::is_difunctional;
use mobjlab::sweep::{criterion_id, run_criterion, SweepConfig, CRITERIA, DEFAULT_SEED};
use mobjlab::uvfin::{check_conditions_ab, verify_convergence, FiniteConvergence};
use mobjlab::vcat::{
    coproduct, factorize, is_regular_mono, product, pushout_along_regmono, verify_vcategory, verify_vfunctor,
    VCategory,
};
use mobjlab::wcheck::{wmaltsev_direct, wmaltsev_factorization_oracle, wmaltsev_hom_oracle, wmaltsev_structural};
use mobjlab::{BoundedVerdict, Error, Result, Verdict};

mod report;

use report::{sha256_hex, Findings, Report, Timing};

#[derive(Parser, Debug)]
#[command(name = "mobjlab", version, about = "Checks (W-)Mal'tsev objects over finite quantale-enriched categories")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    /// Quantale file or fixture name (2, C1+, C2+, C3+, L4, max4).
    #[arg(long, global = true)]
    quantale: Option<String>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantale axioms and cartesianness.
    #[command(subcommand)]
    Quantale(QuantaleCmd),
    /// V-categories and their constructions.
    #[command(subcommand)]
    Vcat(VcatCmd),
    /// Is Y a W-Mal'tsev object of (V-Cat)^op?
    Wmaltsev {
        y: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        /// Component size bound for `--method hom`.
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Mal'tsev objects and the double split epi counterexample.
    #[command(subcommand)]
    Maltsev(MaltsevCmd),
    /// Finite monoids: group check and inverse witnesses.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// Preordered groups given by a cone.
    #[command(subcommand)]
    Ordgrp(OrdgrpCmd),
    /// Finite (U,V)-categories.
    #[command(subcommand)]
    Uv(UvCmd),
    /// Set relations.
    #[command(subcommand)]
    Rel(RelCmd),
    /// Acceptance sweeps.
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum QuantaleCmd {
    Verify { quantale: String },
    Cartesian { quantale: String },
}

#[derive(Subcommand, Debug)]
enum VcatCmd {
    Verify { file: PathBuf },
    Product { left: PathBuf, right: PathBuf },
    Coproduct { left: PathBuf, right: PathBuf },
    /// Pushout of `f: X → Y` along a regular mono `m: X → Z`.
    Pushout { span: PathBuf },
    /// (epi, regular mono) factorization of a V-functor.
    Factorize { functor: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Direct,
    Structural,
    Factorization,
    Hom,
}

#[derive(Subcommand, Debug)]
enum MaltsevCmd {
    /// Builds the three-point diagram for a pair with `u ⊗ v < u ∧ v`, or
    /// re-checks a diagram manifest given with `--diagram`.
    Counterexample {
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long, conflicts_with_all = ["u", "v"])]
        diagram: Option<PathBuf>,
    },
    Verdict {
        y: PathBuf,
        /// Largest `|D|` searched over a cartesian quantale.
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MonoidCmd {
    Check {
        monoid: PathBuf,
    },
    /// Searches for the word witness of an element, or checks one.
    Witness {
        monoid: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        /// A witness file to check instead of searching.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum OrdgrpCmd {
    Check { group: PathBuf },
}

#[derive(Subcommand, Debug)]
enum UvCmd {
    Verify { file: PathBuf },
    /// Conditions (a) and (b).
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum RelCmd {
    Difunctional { relation: PathBuf },
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Criterion number or name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 100)]
    random_pushouts: usize,
    #[arg(long, default_value_t = 10_000)]
    random_relations: usize,
    #[arg(long, default_value_t = 100)]
    closure_instances: usize,
    /// Cospan component bound for the hom-relation sweep.
    #[arg(long, default_value_t = 2)]
    hom_bound: usize,
}

/// Input loading with digests.
struct Ctx {
    inputs: BTreeMap<String, String>,
    quantale: Option<Arc<Quantale>>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = std::fs::read(path)?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }

    fn json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = self.read(path)?;
        Ok(serde_json::from_slice(&bytes)?)
    }

    fn load_quantale(&mut self, spec: &str) -> Result<Quantale> {
        let path = Path::new(spec);
        if path.is_file() {
            self.json::<QuantaleRef>(path)?.resolve()
        } else {
            fixture_quantale(spec).ok_or_else(|| Error::Malformed(format!("`{spec}` is neither a file nor a fixture")))
        }
    }

    fn required_quantale(&self) -> Result<Arc<Quantale>> {
        self.quantale
            .clone()
            .ok_or_else(|| Error::Malformed("this command needs --quantale".into()))
    }

    fn vcat(&mut self, path: &Path) -> Result<VCategory> {
        let file: VCatFile = self.json(path)?;
        file.into_vcategory(self.quantale.clone())
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(n) = std::env::var("MOBJLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    let mut ctx = Ctx {
        inputs: BTreeMap::new(),
        quantale: None,
    };
    let findings = cli
        .quantale
        .as_deref()
        .map(|spec| ctx.load_quantale(spec))
        .transpose()
        .and_then(|q| {
            ctx.quantale = q.map(Arc::new);
            dispatch(&cli, &mut ctx)
        });
    let findings = match findings {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut command = vec!["mobjlab".to_string()];
    command.extend(argv.into_iter().skip(1));
    let report = Report {
        tool: "mobjlab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command,
        inputs: ctx.inputs,
        headline: findings.headline(),
        verdicts: findings.verdicts,
        witnesses: findings.witnesses,
        output: findings.output,
        timing: Timing {
            millis: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    match cli.report {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<Findings> {
    let mut out = Findings::default();
    match &cli.command {
        Command::Quantale(QuantaleCmd::Verify { quantale }) => {
            let q = ctx.load_quantale(quantale)?;
            match verify_quantale(&q) {
                Verdict::Holds => out.verdict(format!("{} is a unital integral quantale", q.name()), true),
                Verdict::Fails(w) => out.verdict(format!("{} is a unital integral quantale", q.name()), false).witness(&w),
            };
        }
        Command::Quantale(QuantaleCmd::Cartesian { quantale }) => {
            let q = ctx.load_quantale(quantale)?;
            if let Verdict::Fails(w) = verify_quantale(&q) {
                return Err(Error::Malformed(format!("not a quantale: {w:?}")));
            }
            match cartesian_witness(&q) {
                None => out.verdict(format!("{} is cartesian", q.name()), true),
                Some((u, v)) => out.verdict(format!("{} is cartesian", q.name()), false).witness(&json!({
                    "u": q.name_of(u),
                    "v": q.name_of(v),
                    "tensor": q.name_of(q.tensor(u, v)),
                    "meet": q.name_of(q.meet_pair(u, v)),
                })),
            };
        }
        Command::Vcat(cmd) => vcat(cmd, ctx, &mut out)?,
        Command::Wmaltsev { y, method, bound } => {
            let y = ctx.vcat(y)?;
            require_verified(&y)?;
            match method {
                Method::Direct => record(&mut out, "W-Mal'tsev (triple scan)", wmaltsev_direct(&y)),
                Method::Structural => record(&mut out, "W-Mal'tsev (symmetric and ∧-transitive)", wmaltsev_structural(&y)),
                Method::Factorization => {
                    record(&mut out, "W-Mal'tsev (g: X → Y is a V-functor)", wmaltsev_factorization_oracle(&y)?)
                }
                Method::Hom => match wmaltsev_hom_oracle(&y, *bound)? {
                    BoundedVerdict::HoldsAtBound { bound, checked } => {
                        out.verdict_noted(
                            "W-Mal'tsev (hom relations difunctional)",
                            true,
                            format!("true at bound {bound}; {checked} cospans checked"),
                        );
                    }
                    BoundedVerdict::Falsified { witness } => {
                        out.verdict("W-Mal'tsev (hom relations difunctional)", false).witness(&witness);
                    }
                },
            }
        }
        Command::Maltsev(MaltsevCmd::Counterexample { u, v, diagram }) => {
            let q = ctx.required_quantale()?;
            if let Some(path) = diagram {
                let manifest: DiagramManifest = ctx.json(path)?;
                let d = DoubleSplitEpi::from_manifest(&q, &manifest)?;
                out.verdict("diagram is a double split epimorphism", true);
                let c = comparison_is_regular_mono(&d)?;
                let fails = !c.holds();
                record(&mut out, "comparison is a regular mono", c);
                out.headline = Some(fails);
                return Ok(out);
            }
            let pair = match (u, v) {
                (Some(u), Some(v)) => Some((q.elem(u)?, q.elem(v)?)),
                (None, None) => cartesian_witness(&q),
                _ => return Err(Error::Malformed("give both --u and --v or neither".into())),
            };
            let Some((u, v)) = pair else {
                out.verdict_noted(
                    format!("{} admits the counterexample", q.name()),
                    false,
                    "the quantale is cartesian",
                );
                return Ok(out);
            };
            let d = build_counterexample(&q, u, v)?;
            out.verdict_noted(
                format!("{} admits the counterexample", q.name()),
                true,
                format!("u = {}, v = {}", q.name_of(u), q.name_of(v)),
            );
            let c = comparison_is_regular_mono(&d)?;
            let fails = !c.holds();
            record(&mut out, "comparison is a regular mono", c);
            out.headline = Some(fails);
            out.output(&d.manifest());
        }
        Command::Maltsev(MaltsevCmd::Verdict { y, bound }) => {
            let q = ctx.required_quantale()?;
            let y = ctx.vcat(y)?;
            require_verified(&y)?;
            match maltsev_object_verdict(&q, &y, *bound)? {
                MaltsevVerdict::Holds { reason } => {
                    out.verdict_noted("Mal'tsev object", true, reason);
                }
                MaltsevVerdict::Fails { witness } => {
                    out.verdict_noted("Mal'tsev object", false, witness.note.clone()).witness(&witness);
                }
                MaltsevVerdict::UndeterminedAtBound { bound, checked } => {
                    out.verdict_noted(
                        "Mal'tsev object",
                        true,
                        format!("undetermined: no failing double split epi with |D| ≤ {bound}; {checked} checked"),
                    );
                }
            }
        }
        Command::Monoid(MonoidCmd::Check { monoid }) => {
            let m = ctx.json::<MonoidFile>(monoid)?.into_monoid()?;
            if let Verdict::Fails(w) = verify_monoid(&m) {
                return Err(Error::Malformed(format!("not a monoid: {w:?}")));
            }
            let w = wmaltsev_monoid(&m);
            let group = is_group(&m).holds();
            record(&mut out, "W-Mal'tsev object of Mon", w);
            out.verdict("group", group);
        }
        Command::Monoid(MonoidCmd::Witness {
            monoid,
            element,
            kmax,
            verify,
        }) => {
            let m = ctx.json::<MonoidFile>(monoid)?.into_monoid()?;
            if let Verdict::Fails(w) = verify_monoid(&m) {
                return Err(Error::Malformed(format!("not a monoid: {w:?}")));
            }
            let x = m.element(element)?;
            let witness = match verify {
                Some(path) => {
                    let w: WordWitness = ctx.json(path)?;
                    if w.x != *element {
                        return Err(Error::InvalidWitness(format!("witness is for `{}`, not `{element}`", w.x)));
                    }
                    Some(w)
                }
                None => witness_search(&m, x, *kmax),
            };
            match witness {
                Some(w) => {
                    let valid = w.check(&m).is_ok();
                    out.verdict_noted("word witness", valid, format!("k = {}", w.k()));
                    if valid {
                        let y = inverse_from_witness(&m, &w)?;
                        out.verdict_noted("inverse", true, m.element_name(y).to_string());
                    }
                    out.witness(&w);
                }
                None => {
                    out.verdict_noted("word witness", false, format!("none with k ≤ {kmax}"));
                }
            }
        }
        Command::Ordgrp(OrdgrpCmd::Check { group }) => {
            let g = ctx.json::<OrdGrpFile>(group)?.into_ordgrp()?;
            let name = g.name();
            match maltsev_object_ordgrp(&g)? {
                Verdict::Holds => out.verdict(format!("{name} is a Mal'tsev object of OrdGrp"), true),
                Verdict::Fails(w) => out.verdict(format!("{name} is a Mal'tsev object of OrdGrp"), false).witness(&w),
            };
            match wmaltsev_ordgrp_abelian(&g) {
                Ok(v) => {
                    out.verdict("W-Mal'tsev object of OrdGrp", v.holds());
                }
                Err(Error::NotDecided(note)) => {
                    out.verdict_noted("W-Mal'tsev object of OrdGrp", false, format!("not decided: {note}"));
                }
                Err(e) => return Err(e),
            }
            out.headline = Some(out.verdicts[0].value);
        }
        Command::Uv(UvCmd::Verify { file }) => {
            let c = convergence(ctx, file)?;
            record(&mut out, "(R) and (T) on principal ultrafilters", verify_convergence(&c));
        }
        Command::Uv(UvCmd::Check { file }) => {
            let c = convergence(ctx, file)?;
            if let Verdict::Fails(w) = verify_convergence(&c) {
                return Err(Error::Malformed(format!("not a convergence structure: {w:?}")));
            }
            record(&mut out, "conditions (a) and (b)", check_conditions_ab(&c));
        }
        Command::Rel(RelCmd::Difunctional { relation }) => {
            let r = ctx.json::<RelationFile>(relation)?.into_relation()?;
            record(&mut out, "difunctional", is_difunctional(&r));
        }
        Command::Sweep(args) => {
            let cfg = SweepConfig {
                seed: cli.seed,
                random_pushouts: args.random_pushouts,
                random_relations: args.random_relations,
                closure_instances: args.closure_instances,
                hom_bound: args.hom_bound,
            };
            let ids: Vec<u8> = if args.suite == "all" {
                CRITERIA.iter().map(|(id, _)| *id).collect()
            } else {
                vec![criterion_id(&args.suite).ok_or_else(|| Error::Malformed(format!("unknown suite `{}`", args.suite)))?]
            };
            let mut all = true;
            for id in ids {
                let o = run_criterion(id, &cfg)?;
                all &= o.passed;
                out.verdict_noted(
                    format!("criterion {} {}", o.id, o.name),
                    o.passed,
                    format!("{} instances{}{}", o.instances, if o.detail.is_empty() { "" } else { "; " }, o.detail),
                );
            }
            out.headline = Some(all);
        }
    }
    Ok(out)
}

fn vcat(cmd: &VcatCmd, ctx: &mut Ctx, out: &mut Findings) -> Result<()> {
    match cmd {
        VcatCmd::Verify { file } => {
            let x = ctx.vcat(file)?;
            record(out, "V-category", verify_vcategory(&x));
        }
        VcatCmd::Product { left, right } => {
            let (a, b) = (verified(ctx, left)?, verified(ctx, right)?);
            let p = product(&a, &b)?;
            out.verdict("product", true).output(&json!({
                "object": VCatFile::from_vcategory(&p.object),
                "projections": p.projections.iter().map(|f| f.label()).collect::<Vec<_>>(),
            }));
        }
        VcatCmd::Coproduct { left, right } => {
            let (a, b) = (verified(ctx, left)?, verified(ctx, right)?);
            let c = coproduct(&a, &b)?;
            out.verdict("coproduct", true).output(&json!({
                "object": VCatFile::from_vcategory(&c.object),
                "injections": c.injections.iter().map(|f| f.label()).collect::<Vec<_>>(),
            }));
        }
        VcatCmd::Pushout { span } => {
            let file: SpanFile = ctx.json(span)?;
            let (f, m) = file.into_maps(ctx.quantale.clone())?;
            for x in [f.source(), f.target(), m.target()] {
                require_verified(x)?;
            }
            if let Verdict::Fails(w) = verify_vfunctor(&f) {
                return Err(Error::Precondition(format!("f is not a V-functor: {w}")));
            }
            let p = pushout_along_regmono(&f, &m)?;
            let leg_regular = is_regular_mono(&p.leg_y).holds();
            out.verdict("pushout", true)
                .verdict("leg Y → W is a regular mono", leg_regular)
                .output(&json!({
                    "object": VCatFile::from_vcategory(&p.object),
                    "leg_y": p.leg_y.label(),
                    "leg_z": p.leg_z.label(),
                }));
        }
        VcatCmd::Factorize { functor } => {
            let file: FunctorFile = ctx.json(functor)?;
            let f = file.into_functor(ctx.quantale.clone())?;
            require_verified(f.source())?;
            require_verified(f.target())?;
            match verify_vfunctor(&f) {
                Verdict::Fails(w) => {
                    out.verdict("f is a V-functor", false).witness(&w);
                }
                Verdict::Holds => {
                    let fact = factorize(&f)?;
                    out.verdict("f is a V-functor", true)
                        .verdict("image inclusion is a regular mono", is_regular_mono(&fact.mono).holds())
                        .output(&json!({
                            "image": VCatFile::from_vcategory(&fact.image),
                            "epi": fact.epi.label(),
                            "mono": fact.mono.label(),
                        }));
                }
            }
        }
    }
    Ok(())
}

fn record<W: serde::Serialize>(out: &mut Findings, check: &str, v: Verdict<W>) {
    match v {
        Verdict::Holds => {
            out.verdict(check, true);
        }
        Verdict::Fails(w) => {
            out.verdict(check, false).witness(&w);
        }
    }
}

fn require_verified(x: &VCategory) -> Result<()> {
    match verify_vcategory(x) {
        Verdict::Holds => Ok(()),
        Verdict::Fails(w) => Err(Error::Precondition(format!("`{}` is not a V-category: {w:?}", x.name()))),
    }
}

fn verified(ctx: &mut Ctx, path: &Path) -> Result<VCategory> {
    let x = ctx.vcat(path)?;
    require_verified(&x)?;
    Ok(x)
}

fn convergence(ctx: &mut Ctx, path: &Path) -> Result<FiniteConvergence> {
    let file: VCatFile = ctx.json(path)?;
    if let Some(k) = &file.kind {
        if k != "convergence" {
            return Err(Error::Malformed(format!("expected kind `convergence`, found `{k}`")));
        }
    }
    Ok(FiniteConvergence::from_matrix(&file.into_vcategory(ctx.quantale.clone())?))
}
