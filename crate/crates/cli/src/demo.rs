use serde_json::json;
use tpir_audit::capacity::capacity;
use tpir_core::layout::BlockRole;
use tpir_core::{
    achieved_rate, answer_query, build_queries, decode, sample_secrets, total_download, Answer, MessageStore,
    SchemeParams, SeededRng,
};

use crate::{CliError, Format, Outcome};

/// Larger messages make the walkthrough unreadable.
pub const DEMO_MAX_LEN: usize = 4096;

const SHOWN_SYMBOLS: usize = 12;

fn preview(values: &[u64]) -> String {
    let shown: Vec<String> = values.iter().take(SHOWN_SYMBOLS).map(u64::to_string).collect();
    if values.len() > SHOWN_SYMBOLS {
        format!("[{} ... ({} total)]", shown.join(" "), values.len())
    } else {
        format!("[{}]", shown.join(" "))
    }
}

pub fn cmd_demo(p: &SchemeParams, desired: usize, seed: u64, format: Format) -> Result<Outcome, CliError> {
    if p.message_len() > DEMO_MAX_LEN {
        return Err(CliError::Usage(format!(
            "N^K = {} exceeds the demo limit of {DEMO_MAX_LEN}; run `tpir audit` on this instance instead",
            p.message_len()
        )));
    }
    let p = p.with_seed(seed);
    let mut rng = SeededRng::new(seed);
    let secrets = sample_secrets(&p, &mut rng);
    let store = MessageStore::random(&p, &mut rng);
    let plan = build_queries(&p, desired, &secrets)?;
    let layout = plan.layout();
    let answers: Vec<Answer> = plan
        .queries()
        .iter()
        .enumerate()
        .map(|(db, q)| answer_query(db, q, &store))
        .collect::<Result<_, _>>()?;
    let used = &answers[..p.responders()];
    let decoded = decode(&p, desired, &secrets, used)?;
    let ok = decoded == store.message(desired);
    let l = p.message_len();
    let download = total_download(&p);
    let cap = capacity(p.messages(), p.responders(), p.colluders())?;

    // Which messages each query row actually touches.
    let touched: Vec<Vec<Vec<usize>>> = plan
        .queries()
        .iter()
        .map(|q| {
            let segments: Vec<_> = (0..p.messages()).map(|k| q.segment(k)).collect();
            (0..q.rows())
                .map(|r| {
                    (0..p.messages())
                        .filter(|&k| segments[k].row(r).iter().any(|&x| x != 0))
                        .map(|k| k + 1)
                        .collect()
                })
                .collect()
        })
        .collect();

    if format == Format::Records {
        let mut lines = vec![json!({"kind": "demo-layout", "params": p, "desired": desired + 1, "layout": layout})];
        for (db, a) in answers.iter().enumerate() {
            lines.push(json!({"kind": "demo-answer", "db": db + 1, "rows_touching": touched[db], "answer": a.values}));
        }
        lines.push(json!({
            "kind": "demo-result", "decoded_matches": ok, "desired_symbols": l,
            "downloaded": download, "rate": achieved_rate(&p).to_string(), "capacity": cap.to_string(),
        }));
        for mut line in lines {
            line["schema"] = json!(tpir_audit::report::RECORD_SCHEMA);
            println!("{line}");
        }
        return Ok(if ok { Outcome::Ok } else { Outcome::CheckFailed });
    }

    println!("== retrieving message {} of {}  ({p}, seed {seed})", desired + 1, p.messages());
    println!();
    print!("{}", layout.render_table());
    println!();
    println!("== query rows per database ({} rows each)", layout.per_db_rows);
    for (db, rows) in touched.iter().enumerate() {
        let mut parts = Vec::new();
        for b in &layout.blocks {
            if b.per_db == 0 {
                continue;
            }
            let r = b.row_offset..b.row_offset + b.per_db;
            let msgs = &rows[r.start];
            parts.push(format!("{}..{} {}:{:?}", r.start, r.end, b.subset, msgs));
        }
        println!("  db {}: {}", db + 1, parts.join("  "));
    }
    println!();
    println!("== answers");
    for a in &answers {
        println!("  db {}: {}", a.db + 1, preview(&a.values));
    }
    println!();
    let responders: Vec<usize> = used.iter().map(|a| a.db + 1).collect();
    println!("== decoding from databases {responders:?}");
    for (i, b) in layout.blocks.iter().enumerate() {
        match b.role {
            BlockRole::Undesired if b.per_db > 0 => {
                let code = layout.undesired_codes[b.size() - 1].expect("non-empty block has a code");
                let child = layout.child_of(i).map(|c| &layout.blocks[c]);
                let n = p.responders() * b.per_db;
                match child.filter(|c| c.per_db > 0) {
                    Some(c) => println!(
                        "  block {}: {n} received equations fix the ({}, {}) codeword; re-encoded {} parity symbols cancelled from block {}",
                        b.subset,
                        code.len,
                        code.info,
                        p.responders() * c.per_db,
                        c.subset
                    ),
                    None => println!("  block {}: {n} sums of side information, nothing to cancel", b.subset),
                }
            }
            _ => {}
        }
    }
    let d = layout.desired_code;
    println!(
        "  desired: {} clean coordinates of the ({}, {}) code, then undo the secret mixing",
        l, d.len, d.info
    );
    println!("  decoded   {}", preview(&decoded));
    println!("  stored    {}", preview(store.message(desired)));
    println!("  {}", if ok { "match" } else { "MISMATCH" });
    println!();
    let unreduced = format!("{l}/{download}");
    println!(
        "== rate {unreduced} = {} (capacity {cap}{})",
        achieved_rate(&p),
        if achieved_rate(&p) == cap { ", equal" } else { ", DIFFERENT" }
    );
    Ok(if ok { Outcome::Ok } else { Outcome::CheckFailed })
}
