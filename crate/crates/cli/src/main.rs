use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use srg_fusion::arith::QuadraticValue;
use srg_fusion::classify::{classify_all, classify_partition, classify_wreath, default_classifier, verify_certificate, Verdict};
use srg_fusion::fusion::{bm_check, scan_all, scan_wreath, tensor_partitions};
use srg_fusion::oracle::{build_graph, cross_check, scheme_matrices, tensor_fuse, verify_scheme, GraphSpec};
use srg_fusion::partition::SetPartition;
use srg_fusion::product::{tensor_square_table, wreath_table, Orientation, TensorTable};
use srg_fusion::report::{lattice_dot, ClassificationDoc, FusionReportDoc, InputEcho, TOOL_VERSION};
use srg_fusion::scheme::{EigenData, Mode, SrgParams};

#[derive(Parser)]
#[command(name = "srg-fusion", version, about = "Fusions of tensor squares of rank-3 association schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the character table of the scheme, or of its tensor square.
    Table {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        tensor: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Every nontrivial fusion of the tensor square.
    Scan {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Symbolic classification of all 4140 partitions, or of one.
    Classify {
        #[arg(long)]
        partition: Option<String>,
        /// List infeasible partitions too.
        #[arg(long)]
        all: bool,
        /// Re-verify every infeasibility certificate.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Fusions of a wreath square: symbolic, and on the given scheme if any.
    Wreath {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        orientation: u8,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Check one partition on an explicit graph by matrix multiplication.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        partition: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Hasse diagram of all fusions, trivial ones included.
    Lattice {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Compare the character-table criterion with the matrix oracle on all
    /// 4140 partitions.
    Crosscheck {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Args, Default)]
struct Input {
    /// Number of vertices.
    #[arg(long)]
    n: Option<u64>,
    /// Valency.
    #[arg(long)]
    k: Option<u64>,
    /// Common neighbours of adjacent vertices.
    #[arg(long)]
    mu: Option<u64>,
    /// Common neighbours of non-adjacent vertices.
    #[arg(long)]
    nu: Option<u64>,
    /// Valencies and eigenvalues `k,l,r,s`, e.g. `6,6,-1/2+1/2*sqrt(13),-1/2-1/2*sqrt(13)`.
    #[arg(long)]
    eigen: Option<String>,
    /// A named graph: petersen, clebsch, paley<q>, rook<m>, cliques<c>x<s>,
    /// multipartite<p>x<s>, cycle<n>, co-<name>.
    #[arg(long)]
    graph: Option<String>,
    /// Accept non-integral multiplicities.
    #[arg(long)]
    table_algebra: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

impl Input {
    fn given(&self) -> bool {
        self.n.is_some() || self.k.is_some() || self.mu.is_some() || self.nu.is_some() || self.eigen.is_some() || self.graph.is_some()
    }

    fn load(&self) -> Result<(String, EigenData), Failure> {
        let mode = if self.table_algebra { Mode::TableAlgebra } else { Mode::Graph };
        let srg = [self.n, self.k, self.mu, self.nu];
        let sources = [srg.iter().any(Option::is_some), self.eigen.is_some(), self.graph.is_some()];
        match sources.iter().filter(|&&b| b).count() {
            0 => return Err(usage("give one of --n/--k/--mu/--nu, --eigen or --graph")),
            1 => {}
            _ => return Err(usage("give only one of --n/--k/--mu/--nu, --eigen or --graph")),
        }
        if let Some(g) = &self.graph {
            let spec: GraphSpec = g.parse().map_err(usage)?;
            let params = build_graph(&spec).and_then(|g| g.srg_params()).map_err(usage)?;
            let e = EigenData::from_params(&params, mode).map_err(usage)?;
            return Ok((spec.to_string(), e));
        }
        if let Some(s) = &self.eigen {
            let v: Vec<QuadraticValue> = s
                .split(',')
                .map(|x| x.parse::<QuadraticValue>())
                .collect::<Result<_, _>>()
                .map_err(usage)?;
            let [k, l, r, s] = <[QuadraticValue; 4]>::try_from(v).map_err(|_| usage("--eigen needs four values k,l,r,s"))?;
            let e = EigenData::from_eigen(k, l, r, s, mode).map_err(usage)?;
            return Ok(("eigen".to_string(), e));
        }
        let [Some(n), Some(k), Some(mu), Some(nu)] = srg else {
            return Err(usage("--n, --k, --mu and --nu go together"));
        };
        let p = SrgParams::new(n, k, mu, nu);
        let e = EigenData::from_params(&p, mode).map_err(usage)?;
        Ok((format!("srg({n},{k},{mu},{nu})"), e))
    }
}

fn format_or(f: Option<Format>, allowed: &[Format]) -> Result<Format, Failure> {
    let f = f.unwrap_or(allowed[0]);
    if !allowed.contains(&f) {
        return Err(usage("--format dot is only available for lattice"));
    }
    Ok(f)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn partition(s: &str) -> Result<SetPartition, Failure> {
    s.parse().map_err(usage)
}

fn tensor(e: &EigenData) -> TensorTable {
    tensor_square_table(&e.char_table())
}

fn run(cmd: Command) -> Outcome {
    const PLAIN: [Format; 2] = [Format::Text, Format::Json];
    match cmd {
        Command::Table { input, tensor: sq, format } => {
            let f = format_or(format, &PLAIN)?;
            let (_, e) = input.load()?;
            let t = if sq { tensor(&e).table } else { e.char_table() };
            Ok(match f {
                Format::Json => json(&t),
                _ => t.to_string(),
            })
        }
        Command::Scan { input, format } => {
            let f = format_or(format, &PLAIN)?;
            let (source, eigen) = input.load()?;
            let t = tensor(&eigen);
            let doc = FusionReportDoc::new(InputEcho { source, eigen }, &t.table, &scan_all(&t));
            Ok(match f {
                Format::Json => json(&doc),
                _ => doc.to_text(),
            })
        }
        Command::Classify {
            partition: p,
            all,
            check,
            format,
        } => {
            let f = format_or(format, &PLAIN)?;
            if let Some(p) = p {
                let p = partition(&p)?;
                let rec = classify_partition(&p);
                if check {
                    check_record(&p, &rec.verdict)?;
                }
                return Ok(match f {
                    Format::Json => json(&rec),
                    _ => ClassificationDoc::new(
                        &srg_fusion::classify::Classification {
                            summary: srg_fusion::classify::summarize(std::slice::from_ref(&rec)),
                            records: vec![rec],
                        },
                        true,
                    )
                    .to_text(),
                });
            }
            let c = classify_all();
            if check {
                for r in &c.records {
                    check_record(&r.partition, &r.verdict)?;
                }
            }
            let doc = ClassificationDoc::new(&c, all);
            Ok(match f {
                Format::Json => json(&doc),
                _ => doc.to_text(),
            })
        }
        Command::Wreath {
            input,
            orientation,
            format,
        } => {
            let f = format_or(format, &PLAIN)?;
            let o = Orientation::from_number(orientation).ok_or_else(|| usage("--orientation is 1 or 2"))?;
            let sym = classify_wreath(o);
            let numeric = if input.given() {
                let (source, e) = input.load()?;
                let t = tensor(&e);
                let found: Vec<SetPartition> = scan_wreath(&t, o).into_iter().map(|v| v.partition).collect();
                Some((source, wreath_table(&e.char_table(), o).table, found))
            } else {
                None
            };
            if f == Format::Json {
                #[derive(Serialize)]
                struct Doc<'a> {
                    symbolic: &'a srg_fusion::classify::WreathClassification,
                    scheme: Option<Numeric<'a>>,
                    version: &'a str,
                }
                #[derive(Serialize)]
                struct Numeric<'a> {
                    source: &'a str,
                    table: &'a srg_fusion::scheme::CharTable,
                    fusions: &'a [SetPartition],
                }
                return Ok(json(&Doc {
                    symbolic: &sym,
                    scheme: numeric.as_ref().map(|(s, t, p)| Numeric {
                        source: s,
                        table: t,
                        fusions: p,
                    }),
                    version: TOOL_VERSION,
                }));
            }
            let names = |v: &[SetPartition]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            let mut out = format!("wreath classes {} (orientation {})\n", sym.classes, o.number());
            out += &format!("guaranteed: {}\n", names(&sym.guaranteed));
            for (fam, parts) in &sym.special {
                out += &format!("special ({fam}): {}\n", names(parts));
            }
            out += &format!("primitive special cases: {}\n", sym.primitive.len());
            if let Some((source, table, found)) = numeric {
                out += &format!("\n{source}\n{table}fusions: {}\n", names(&found));
            }
            Ok(out)
        }
        Command::Verify {
            graph,
            partition: p,
            format,
        } => {
            let f = format_or(format, &PLAIN)?;
            let spec: GraphSpec = graph.parse().map_err(usage)?;
            let p = partition(&p)?;
            let g = build_graph(&spec).map_err(usage)?;
            let params = g.srg_params().map_err(usage)?;
            let e = EigenData::from_params(&params, Mode::Graph).map_err(usage)?;
            let criterion = bm_check(&tensor(&e).table, &p).map_err(usage)?.is_fusion;
            let sm = scheme_matrices(&g).map_err(usage)?;
            let oracle = verify_scheme(&tensor_fuse(&sm, &p).map_err(usage)?);
            #[derive(Serialize)]
            struct Doc {
                graph: String,
                partition: SetPartition,
                rank: usize,
                fusion: bool,
                criterion: bool,
                valencies: Option<Vec<u64>>,
                witness: Option<String>,
            }
            let doc = Doc {
                graph: spec.to_string(),
                rank: p.rank(),
                partition: p,
                fusion: oracle.is_ok(),
                criterion,
                valencies: oracle.as_ref().ok().map(|t| t.valencies()),
                witness: oracle.as_ref().err().map(ToString::to_string),
            };
            let out = match f {
                Format::Json => json(&doc),
                _ => {
                    let mut s = format!(
                        "{} on {}: {} (rank {})\n",
                        doc.partition,
                        doc.graph,
                        if doc.fusion { "fusion" } else { "not a fusion" },
                        doc.rank
                    );
                    if let Some(v) = &doc.valencies {
                        s += &format!("valencies {v:?}\n");
                    }
                    if let Some(w) = &doc.witness {
                        s += &format!("witness: {w}\n");
                    }
                    s
                }
            };
            if doc.fusion != criterion {
                return Err(Failure::Mismatch(format!("{out}character-table criterion says {criterion}\n")));
            }
            Ok(out)
        }
        Command::Lattice { input, format } => {
            let f = format_or(format, &[Format::Dot, Format::Text, Format::Json])?;
            let (source, e) = input.load()?;
            let t = tensor(&e);
            let mut parts: Vec<SetPartition> = scan_all(&t).into_iter().map(|v| v.partition).collect();
            let ground = srg_fusion::partition::tensor_ground();
            parts.push(SetPartition::discrete(&ground));
            parts.push(SetPartition::single_block(&ground));
            Ok(match f {
                Format::Dot => lattice_dot(&source, &parts),
                Format::Json => {
                    srg_fusion::partition::sort_canonical(&mut parts);
                    let edges = srg_fusion::partition::hasse_edges(&parts);
                    json(&serde_json::json!({ "partitions": parts, "edges": edges }))
                }
                Format::Text => {
                    parts.sort_by_key(|p| std::cmp::Reverse(p.rank()));
                    parts.iter().map(|p| format!("rank {} {}\n", p.rank(), p)).collect()
                }
            })
        }
        Command::Crosscheck { graph, format } => {
            let f = format_or(format, &PLAIN)?;
            let spec: GraphSpec = graph.parse().map_err(usage)?;
            let g = build_graph(&spec).map_err(usage)?;
            let rep = cross_check(&g, tensor_partitions()).map_err(usage)?;
            let out = match f {
                Format::Json => json(&rep),
                _ => {
                    let mut s = format!(
                        "{}: {} partitions, {} fusions, {} disagreements\n",
                        rep.graph,
                        rep.checked,
                        rep.positives.len(),
                        rep.disagreements.len()
                    );
                    for d in &rep.disagreements {
                        s += &format!("  {} criterion={} oracle={}\n", d.partition, d.criterion, d.oracle);
                    }
                    s
                }
            };
            if rep.disagreements.is_empty() {
                Ok(out)
            } else {
                Err(Failure::Mismatch(out))
            }
        }
    }
}

fn check_record(p: &SetPartition, v: &Verdict) -> Result<(), Failure> {
    if let Verdict::Infeasible(cert) = v {
        verify_certificate(default_classifier(), p, cert).map_err(|e| Failure::Mismatch(format!("{p}: certificate rejected: {e}\n")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(out)) => {
            print!("{out}");
            ExitCode::from(2)
        }
    }
}
