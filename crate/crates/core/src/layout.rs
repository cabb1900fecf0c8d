//! Block structure of the retrieval scheme.
//!
//! Every non-empty subset of messages gets a block of downloaded equations,
//! each equation a sum over the subset's messages. A size-`j` block holds
//! `(N-T)^(j-1) * T^(K-j)` equations per database, laid out contiguously in
//! database order, so it has `M` times that many coordinates in total.
//!
//! For an undesired message `k`, every subset `B` containing `k` but not the
//! desired message owns one codeword `G_j * S_k[rows] * W_k` of a shared
//! `((M/T)*a_j, a_j)` code, `a_j = N(N-T)^(j-1) T^(K-j)`: its first
//! `(M/N)*a_j` coordinates feed block `B` and the remaining ones feed block
//! `B + {desired}`. The desired message is coded once by an
//! `(M N^(K-1), N^K)` code whose coordinates are cut into the blocks that
//! contain it.

use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldModulus;

/// Protocol parameters: `K` messages, `M` databases of which any `N` suffice,
/// privacy against any `T` colluding databases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SchemeParams {
    messages: usize,
    responders: usize,
    colluders: usize,
    databases: usize,
    modulus: FieldModulus,
    seed: u64,
}

impl SchemeParams {
    /// Validates `1 <= T <= N <= M`, `K >= 1` and picks the smallest prime
    /// field that fits every code of the layout.
    pub fn new(messages: usize, responders: usize, colluders: usize, databases: usize) -> Result<Self> {
        if messages == 0 {
            return Err(Error::InvalidParams("need at least one message".into()));
        }
        if !(1 <= colluders && colluders <= responders && responders <= databases) {
            return Err(Error::InvalidParams(format!(
                "need 1 <= T <= N <= M, got T={colluders}, N={responders}, M={databases}"
            )));
        }
        let exponent = u32::try_from(messages).map_err(|_| Error::TooLarge("K".into()))?;
        (responders as u64)
            .checked_pow(exponent)
            .filter(|&l| l <= u32::MAX as u64)
            .ok_or_else(|| Error::TooLarge(format!("message length {responders}^{messages}")))?;
        let mut params = Self {
            messages,
            responders,
            colluders,
            databases,
            modulus: FieldModulus::smallest_prime_geq(2),
            seed: 0,
        };
        params.modulus = FieldModulus::smallest_prime_geq(params.required_code_length() as u64);
        Ok(params)
    }

    /// Overrides the automatically chosen field.
    pub fn with_modulus(mut self, modulus: FieldModulus) -> Result<Self> {
        let needed = self.required_code_length();
        if (modulus.value() as u128) < needed as u128 {
            return Err(Error::FieldTooSmall {
                q: modulus.value(),
                needed,
                context: "longest code in the layout".into(),
            });
        }
        self.modulus = modulus;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `K`
    pub fn messages(&self) -> usize {
        self.messages
    }

    /// `N`
    pub fn responders(&self) -> usize {
        self.responders
    }

    /// `T`
    pub fn colluders(&self) -> usize {
        self.colluders
    }

    /// `M`
    pub fn databases(&self) -> usize {
        self.databases
    }

    pub fn modulus(&self) -> FieldModulus {
        self.modulus
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_robust(&self) -> bool {
        self.databases > self.responders
    }

    /// `L = N^K` symbols per message.
    pub fn message_len(&self) -> usize {
        self.responders.pow(self.messages as u32)
    }

    /// `(N-T)^(j-1) * T^(K-j)`: equations per database in each size-`j` block.
    pub fn per_db_block_len(&self, size: usize) -> usize {
        assert!((1..=self.messages).contains(&size));
        (self.responders - self.colluders).pow(size as u32 - 1) * self.colluders.pow((self.messages - size) as u32)
    }

    /// `a_j = N (N-T)^(j-1) T^(K-j)`: information length of the size-`j` code.
    pub fn info_len(&self, size: usize) -> usize {
        self.responders * self.per_db_block_len(size)
    }

    /// Shape of the shared undesired-message code for blocks of `size`
    /// (`1 <= size < K`), or `None` when the blocks are empty (`T = N`, size > 1).
    pub fn undesired_code(&self, size: usize) -> Option<CodeShape> {
        assert!(size >= 1 && size < self.messages);
        let info = self.info_len(size);
        (info > 0).then(|| CodeShape {
            len: self.databases * info / self.colluders,
            info,
        })
    }

    pub fn desired_code(&self) -> CodeShape {
        CodeShape {
            len: self.databases * self.message_len() / self.responders,
            info: self.message_len(),
        }
    }

    /// Longest codeword any layout for these parameters uses.
    pub fn required_code_length(&self) -> usize {
        (1..self.messages)
            .filter_map(|j| self.undesired_code(j))
            .map(|c| c.len)
            .chain([self.desired_code().len])
            .max()
            .expect("desired code always exists")
    }

    /// Equations downloaded from each database.
    pub fn per_db_rows(&self) -> usize {
        (1..=self.messages)
            .map(|j| binomial(self.messages, j) * self.per_db_block_len(j))
            .sum()
    }
}

impl fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K={} N={} T={} M={} q={}",
            self.messages,
            self.responders,
            self.colluders,
            self.databases,
            self.modulus.value()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodeShape {
    pub len: usize,
    pub info: usize,
}

/// A non-empty, sorted set of 0-based message indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MessageSubset(Vec<usize>);

impl MessageSubset {
    pub fn new(mut members: Vec<usize>, messages: usize) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::InvalidParams("empty message subset".into()));
        }
        if let Some(&bad) = members.iter().find(|&&k| k >= messages) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: messages,
            });
        }
        Ok(Self(members))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    fn without(&self, k: usize) -> Option<Self> {
        let rest: Vec<usize> = self.0.iter().copied().filter(|&x| x != k).collect();
        (!rest.is_empty() && rest.len() < self.0.len()).then_some(Self(rest))
    }
}

impl fmt::Display for MessageSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// All non-empty subsets of `0..messages`, by size then lexicographically.
pub fn canonical_subsets(messages: usize) -> Vec<MessageSubset> {
    let mut subsets: Vec<MessageSubset> = (1u64..1 << messages)
        .map(|mask| MessageSubset((0..messages).filter(|&k| mask >> k & 1 == 1).collect()))
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
    subsets
}

/// Where a block's coordinates live in the codewords.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BlockRole {
    /// Does not contain the desired message: block coordinate `i` is codeword
    /// coordinate `i` of each member's size-class codeword.
    Undesired,
    /// Contains the desired message: coordinate `i` is desired-codeword
    /// coordinate `desired_offset + i`, and, for each undesired member, parity
    /// coordinate `parity_offset + i` of that member's codeword for `parent`.
    Desired {
        desired_offset: usize,
        parent: Option<usize>,
        parity_offset: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub subset: MessageSubset,
    pub per_db: usize,
    /// First row of this block inside every database's query.
    pub row_offset: usize,
    pub role: BlockRole,
}

impl Block {
    pub fn size(&self) -> usize {
        self.subset.len()
    }

    /// Total coordinates across all databases.
    pub fn len(&self, databases: usize) -> usize {
        self.per_db * databases
    }

    pub fn is_empty(&self) -> bool {
        self.per_db == 0
    }

    /// Block coordinates served by database `db`.
    pub fn db_range(&self, db: usize) -> Range<usize> {
        db * self.per_db..(db + 1) * self.per_db
    }
}

/// Rows of a secret matrix feeding one codeword.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecretRows {
    /// Block whose codeword these rows generate (for the desired message,
    /// the whole desired codeword; `block` is then `None`).
    pub block: Option<usize>,
    pub rows: Range<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockLayout {
    pub params: SchemeParams,
    #[serde(skip)]
    desired: usize,
    pub blocks: Vec<Block>,
    /// `D`: rows in every database's query.
    pub per_db_rows: usize,
    /// Shared code for undesired blocks, indexed by `size - 1`.
    pub undesired_codes: Vec<Option<CodeShape>>,
    pub desired_code: CodeShape,
    /// Secret rows consumed by each message, in canonical block order.
    pub secret_rows: Vec<Vec<SecretRows>>,
}

impl BlockLayout {
    pub fn desired(&self) -> usize {
        self.desired
    }

    pub fn block_index(&self, subset: &MessageSubset) -> Option<usize> {
        self.blocks.iter().position(|b| &b.subset == subset)
    }

    /// The rows of `S_k` feeding the undesired block `block`.
    pub fn secret_rows_for(&self, message: usize, block: usize) -> Option<Range<usize>> {
        self.secret_rows[message]
            .iter()
            .find(|s| s.block == Some(block))
            .map(|s| s.rows.clone())
    }

    /// Total desired-codeword coordinates a set of databases receives.
    pub fn desired_coords(&self, dbs: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for b in &self.blocks {
            if let BlockRole::Desired { desired_offset, .. } = b.role {
                for &db in dbs {
                    out.extend(b.db_range(db).map(|i| desired_offset + i));
                }
            }
        }
        out
    }

    /// Coordinates of the codeword owned by undesired block `block` that a set
    /// of databases receives: information coordinates from the block itself
    /// and parity coordinates from its child block.
    pub fn codeword_coords(&self, block: usize, dbs: &[usize]) -> Vec<usize> {
        let b = &self.blocks[block];
        let mut out: Vec<usize> = dbs.iter().flat_map(|&db| b.db_range(db)).collect();
        if let Some(child) = self.child_of(block) {
            let c = &self.blocks[child];
            if let BlockRole::Desired { parity_offset, .. } = c.role {
                out.extend(dbs.iter().flat_map(|&db| c.db_range(db)).map(|i| parity_offset + i));
            }
        }
        out
    }

    /// The block `B + {desired}` for an undesired block `B`.
    pub fn child_of(&self, block: usize) -> Option<usize> {
        self.blocks
            .iter()
            .position(|c| matches!(c.role, BlockRole::Desired { parent: Some(p), .. } if p == block))
    }

    /// Human-readable table of blocks, database slices, and secret rows.
    pub fn render_table(&self) -> String {
        use std::fmt::Write;
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{p}  desired={}  L={}  D={}  download={}",
            self.desired + 1,
            p.message_len(),
            self.per_db_rows,
            p.responders() * self.per_db_rows
        );
        let _ = writeln!(
            s,
            "{:<14} {:>4} {:>7} {:>6} {:>9}  codeword coordinates",
            "block", "size", "per-db", "rows", "total"
        );
        for (i, b) in self.blocks.iter().enumerate() {
            let rows = format!("{}..{}", b.row_offset, b.row_offset + b.per_db);
            let role = match &b.role {
                BlockRole::Undesired => match self.codeword_shape(i) {
                    Some(c) => format!("info 0..{} of ({}, {}) code", b.len(p.databases()), c.len, c.info),
                    None => "empty".into(),
                },
                BlockRole::Desired {
                    desired_offset,
                    parent,
                    parity_offset,
                } => {
                    let mut r = format!(
                        "desired {}..{}",
                        desired_offset,
                        desired_offset + b.len(p.databases())
                    );
                    if let Some(par) = parent {
                        let _ = write!(
                            r,
                            " + parity {}..{} of {}",
                            parity_offset,
                            parity_offset + b.len(p.databases()),
                            self.blocks[*par].subset
                        );
                    }
                    r
                }
            };
            let _ = writeln!(
                s,
                "{:<14} {:>4} {:>7} {:>6} {:>9}  {}",
                b.subset.to_string(),
                b.size(),
                b.per_db,
                rows,
                b.len(p.databases()),
                role
            );
        }
        let _ = writeln!(s, "secret rows:");
        for (k, slices) in self.secret_rows.iter().enumerate() {
            let parts: Vec<String> = slices
                .iter()
                .map(|sr| match sr.block {
                    Some(b) => format!("{}:{}..{}", self.blocks[b].subset, sr.rows.start, sr.rows.end),
                    None => format!("desired:{}..{}", sr.rows.start, sr.rows.end),
                })
                .collect();
            let _ = writeln!(s, "  S_{}  {}", k + 1, parts.join("  "));
        }
        s
    }

    fn codeword_shape(&self, block: usize) -> Option<CodeShape> {
        let size = self.blocks[block].size();
        self.undesired_codes.get(size - 1).copied().flatten()
    }
}

/// Builds the block layout for retrieving message `desired` (0-based).
pub fn build_layout(params: &SchemeParams, desired: usize) -> Result<BlockLayout> {
    let k_total = params.messages();
    if desired >= k_total {
        return Err(Error::IndexOutOfRange {
            index: desired,
            limit: k_total,
        });
    }
    let m = params.databases();
    let q = params.modulus();
    let undesired_codes: Vec<Option<CodeShape>> = (1..k_total).map(|j| params.undesired_code(j)).collect();
    let desired_code = params.desired_code();

    let too_small = |len: usize, what: String| Error::FieldTooSmall {
        q: q.value(),
        needed: len,
        context: what,
    };
    if (q.value() as u128) < desired_code.len as u128 {
        return Err(too_small(desired_code.len, format!("desired code of message {}", desired + 1)));
    }

    let subsets = canonical_subsets(k_total);
    let mut blocks: Vec<Block> = Vec::with_capacity(subsets.len());
    let mut row_offset = 0;
    let mut desired_offset = 0;
    for subset in subsets {
        let size = subset.len();
        let per_db = params.per_db_block_len(size);
        let role = if subset.contains(desired) {
            let parent = subset.without(desired).map(|p| {
                blocks
                    .iter()
                    .position(|b| b.subset == p)
                    .expect("smaller subsets come first")
            });
            let parity_offset = parent.map_or(0, |p| blocks[p].len(m));
            let role = BlockRole::Desired {
                desired_offset,
                parent,
                parity_offset,
            };
            desired_offset += per_db * m;
            role
        } else {
            if let Some(code) = undesired_codes[size - 1] {
                if (q.value() as u128) < code.len as u128 {
                    return Err(too_small(code.len, format!("block {subset}")));
                }
            }
            BlockRole::Undesired
        };
        blocks.push(Block {
            subset,
            per_db,
            row_offset,
            role,
        });
        row_offset += per_db;
    }

    let mut secret_rows = vec![Vec::new(); k_total];
    for (k, slices) in secret_rows.iter_mut().enumerate() {
        if k == desired {
            slices.push(SecretRows {
                block: None,
                rows: 0..params.message_len(),
            });
            continue;
        }
        let mut next = 0;
        for (i, b) in blocks.iter().enumerate() {
            if matches!(b.role, BlockRole::Undesired) && b.subset.contains(k) {
                let len = params.info_len(b.size());
                if len == 0 {
                    continue;
                }
                slices.push(SecretRows {
                    block: Some(i),
                    rows: next..next + len,
                });
                next += len;
            }
        }
    }

    Ok(BlockLayout {
        params: *params,
        desired,
        blocks,
        per_db_rows: row_offset,
        undesired_codes,
        desired_code,
        secret_rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LayerCount {
    pub layer: usize,
    /// Equations per database mixing exactly `layer` messages.
    pub per_db: usize,
    /// Of those, equations that involve the desired message.
    pub per_db_desired: usize,
}

pub fn per_layer_counts(params: &SchemeParams) -> Vec<LayerCount> {
    let k = params.messages();
    (1..=k)
        .map(|j| {
            let per = params.per_db_block_len(j);
            LayerCount {
                layer: j,
                per_db: per * binomial(k, j),
                per_db_desired: per * binomial(k - 1, j - 1),
            }
        })
        .collect()
}

/// Symbols downloaded from the `N` responders.
pub fn total_download(params: &SchemeParams) -> usize {
    params.responders() * params.per_db_rows()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: usize, n: usize, t: usize, m: usize) -> SchemeParams {
        SchemeParams::new(k, n, t, m).unwrap()
    }

    fn block<'a>(layout: &'a BlockLayout, members: &[usize]) -> &'a Block {
        let s = MessageSubset::new(members.to_vec(), layout.params.messages()).unwrap();
        &layout.blocks[layout.block_index(&s).unwrap()]
    }

    #[test]
    fn k2_n3_t2_matches_worked_table() {
        let l = build_layout(&params(2, 3, 2, 3), 0).unwrap();
        assert_eq!(block(&l, &[0]).per_db, 2);
        assert_eq!(block(&l, &[1]).per_db, 2);
        assert_eq!(block(&l, &[0, 1]).per_db, 1);
        assert_eq!(l.per_db_rows, 5);
        assert_eq!(l.params.modulus().value(), 11);
        // b_1..b_6 information, b_7..b_9 parity of the (9, 6) code.
        assert_eq!(l.undesired_codes, vec![Some(CodeShape { len: 9, info: 6 })]);
        assert_eq!(l.codeword_coords(1, &[0, 1]), vec![0, 1, 2, 3, 6, 7]);
        assert_eq!(l.secret_rows[1], vec![SecretRows { block: Some(1), rows: 0..6 }]);
    }

    #[test]
    fn k3_n3_t2_totals() {
        let p = params(3, 3, 2, 3);
        let l = build_layout(&p, 0).unwrap();
        let by_layer: Vec<usize> = per_layer_counts(&p).iter().map(|c| c.per_db).collect();
        assert_eq!(by_layer, vec![4 * 3, 2 * 3, 1]);
        assert_eq!(l.per_db_rows, 19);
        assert_eq!(total_download(&p), 57);
        // (18, 12) and (9, 6) codes for the two undesired size classes.
        assert_eq!(
            l.undesired_codes,
            vec![Some(CodeShape { len: 18, info: 12 }), Some(CodeShape { len: 9, info: 6 })]
        );
        assert_eq!(
            l.secret_rows[1],
            vec![
                SecretRows { block: Some(1), rows: 0..12 },
                SecretRows { block: Some(5), rows: 12..18 }
            ]
        );
    }

    #[test]
    fn single_message_degenerates() {
        for (n, t) in [(2, 1), (3, 3), (4, 2)] {
            let p = params(1, n, t, n);
            let l = build_layout(&p, 0).unwrap();
            assert_eq!(l.blocks.len(), 1);
            assert_eq!(l.per_db_rows, 1);
            assert_eq!(total_download(&p), n);
            assert!(l.undesired_codes.is_empty());
        }
    }

    #[test]
    fn layer_counts_examples() {
        let counts = per_layer_counts(&params(2, 3, 2, 3));
        assert_eq!((counts[0].per_db, counts[1].per_db), (4, 1));
        let p = params(2, 4, 3, 4);
        let counts = per_layer_counts(&p);
        assert_eq!((counts[0].per_db, counts[1].per_db), (6, 1));
        assert_eq!(total_download(&p), 28);
    }

    #[test]
    fn download_totals() {
        assert_eq!(total_download(&params(2, 3, 2, 3)), 15);
        assert_eq!(total_download(&params(2, 4, 2, 4)), 24);
        assert_eq!(total_download(&params(3, 3, 2, 3)), 57);
    }

    #[test]
    fn canonical_order() {
        let names: Vec<String> = canonical_subsets(3).iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}", "{1,2,3}"]);
    }

    #[test]
    fn params_validation() {
        assert!(SchemeParams::new(0, 2, 1, 2).is_err());
        assert!(SchemeParams::new(2, 2, 3, 3).is_err());
        assert!(SchemeParams::new(2, 3, 2, 2).is_err());
        assert!(SchemeParams::new(2, 3, 0, 3).is_err());
        let p = params(2, 3, 2, 3);
        assert!(matches!(
            p.with_modulus(FieldModulus::new(7).unwrap()),
            Err(Error::FieldTooSmall { needed: 9, .. })
        ));
        assert_eq!(p.with_modulus(FieldModulus::new(13).unwrap()).unwrap().modulus().value(), 13);
        assert!(build_layout(&p, 2).is_err());
    }

    #[test]
    fn robust_modulus_covers_longest_code() {
        // Desired code (M N^(K-1), N^K) = (15, 9) dominates.
        assert_eq!(params(2, 3, 2, 5).modulus().value(), 17);
        // T = N: single size class, code (M N^(K-1), N^K).
        assert_eq!(params(2, 2, 2, 2).modulus().value(), 5);
        // Auto q for K=2, N=2, T=1.
        assert_eq!(params(2, 2, 1, 2).modulus().value(), 5);
    }

    /// Invariants over a parameter grid.
    #[test]
    fn grid_invariants() {
        for k in 1..=4 {
            for n in 2..=5 {
                for t in 1..=n {
                    for m in n..=n + 2 {
                        let p = params(k, n, t, m);
                        let l_len = p.message_len();
                        let expected_d = if t == n {
                            k * n.pow(k as u32 - 1)
                        } else {
                            (n.pow(k as u32) - t.pow(k as u32)) / (n - t)
                        };
                        assert_eq!(p.per_db_rows(), expected_d, "{p}");
                        let by_layers: usize = per_layer_counts(&p).iter().map(|c| c.per_db).sum();
                        assert_eq!(by_layers * n, total_download(&p));
                        for desired in 0..k {
                            let l = build_layout(&p, desired).unwrap();
                            assert_eq!(l.per_db_rows, expected_d);
                            for (msg, slices) in l.secret_rows.iter().enumerate() {
                                let used: usize = slices.iter().map(|s| s.rows.len()).sum();
                                if msg == desired {
                                    assert_eq!(used, l_len);
                                } else {
                                    assert_eq!(used, t * n.pow(k as u32 - 1), "{p} msg {msg}");
                                }
                            }
                            let desired_total: usize = l
                                .blocks
                                .iter()
                                .filter(|b| b.subset.contains(desired))
                                .map(|b| b.len(m))
                                .sum();
                            assert_eq!(desired_total, l.desired_code.len);
                            assert_eq!(l.desired_code.len * n, m * l_len);
                            // Parity supply of each parent equals the child block length.
                            for (i, b) in l.blocks.iter().enumerate() {
                                if let BlockRole::Desired { parent: Some(par), .. } = b.role {
                                    if let Some(code) = l.undesired_codes[l.blocks[par].size() - 1] {
                                        assert_eq!(code.len - l.blocks[par].len(m), b.len(m), "{p} block {i}");
                                    } else {
                                        assert_eq!(b.per_db, 0);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(21, 7), 116_280);
    }
}
