//! Query generation, answering and decoding.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::FieldModulus;
use crate::layout::{build_layout, total_download, BlockLayout, BlockRole, SchemeParams};
use crate::linalg::{sample_uniform_full_rank, Matrix};
use crate::mds::{MdsCode, MdsSpec};
use crate::rng::SeededRng;

/// `K` messages of `L` symbols each over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MessageStore {
    modulus: FieldModulus,
    messages: Vec<Vec<u64>>,
}

impl MessageStore {
    /// Rejects ragged messages and symbols outside the field.
    pub fn new(modulus: FieldModulus, messages: Vec<Vec<u64>>) -> Result<Self> {
        let len = messages
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidParams("store needs at least one message".into()))?;
        for (k, m) in messages.iter().enumerate() {
            if m.len() != len {
                return Err(Error::InvalidParams(format!(
                    "message {} has {} symbols, expected {len}",
                    k + 1,
                    m.len()
                )));
            }
            if let Some(i) = m.iter().position(|&x| x >= modulus.value()) {
                return Err(Error::InvalidParams(format!(
                    "message {} symbol {i} = {} is not below q = {modulus}",
                    k + 1,
                    m[i]
                )));
            }
        }
        Ok(Self { modulus, messages })
    }

    pub fn zeros(params: &SchemeParams) -> Self {
        Self {
            modulus: params.modulus(),
            messages: vec![vec![0; params.message_len()]; params.messages()],
        }
    }

    pub fn random(params: &SchemeParams, rng: &mut SeededRng) -> Self {
        let q = params.modulus();
        let messages = (0..params.messages())
            .map(|_| (0..params.message_len()).map(|_| rng.field_value(q)).collect())
            .collect();
        Self { modulus: q, messages }
    }

    pub fn modulus(&self) -> FieldModulus {
        self.modulus
    }

    pub fn message_count(&self) -> usize {
        self.messages.len()
    }

    pub fn message_len(&self) -> usize {
        self.messages[0].len()
    }

    pub fn message(&self, k: usize) -> &[u64] {
        &self.messages[k]
    }

    pub fn messages(&self) -> &[Vec<u64>] {
        &self.messages
    }

    /// `(W_1; ...; W_K)` as a column.
    pub fn stacked(&self) -> Matrix {
        Self::stack_columns(std::slice::from_ref(self)).expect("single store is consistent")
    }

    /// One stacked column per store, so several stores can be answered at once.
    pub fn stack_columns(stores: &[MessageStore]) -> Result<Matrix> {
        let first = stores
            .first()
            .ok_or_else(|| Error::InvalidParams("no stores to stack".into()))?;
        let (k, l) = (first.message_count(), first.message_len());
        let s = stores.len();
        let mut data = vec![0; k * l * s];
        for (c, store) in stores.iter().enumerate() {
            if store.modulus != first.modulus {
                return Err(Error::ModulusMismatch {
                    left: first.modulus.value(),
                    right: store.modulus.value(),
                });
            }
            if (store.message_count(), store.message_len()) != (k, l) {
                return Err(Error::ShapeMismatch {
                    op: "stack_columns",
                    left: (k, l),
                    right: (store.message_count(), store.message_len()),
                });
            }
            for (r, &x) in store.messages.iter().flatten().enumerate() {
                data[r * s + c] = x;
            }
        }
        Matrix::new(k * l, s, first.modulus, data)
    }
}

/// The user's private randomness: one uniform invertible `L x L` matrix per message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSecrets {
    pub seed: u64,
    pub matrices: Vec<Matrix>,
}

pub fn sample_secrets(params: &SchemeParams, rng: &mut SeededRng) -> SchemeSecrets {
    let seed = rng.seed();
    let matrices = (0..params.messages())
        .map(|_| sample_uniform_full_rank(params.message_len(), params.modulus(), rng))
        .collect();
    SchemeSecrets { seed, matrices }
}

/// Deliberate breakage for negative-control audits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Undesired side information is repeated instead of MDS-coded, so a
    /// coalition sees the same secret row twice.
    UncodedSideInformation,
}

/// Generators used by one layout.
#[derive(Clone, Debug)]
pub struct CodeBook {
    /// Indexed by block size minus one; `None` for empty size classes.
    pub undesired: Vec<Option<MdsCode>>,
    pub desired: MdsCode,
}

impl CodeBook {
    pub fn new(layout: &BlockLayout, fault: Fault) -> Result<Self> {
        let q = layout.params.modulus();
        let undesired = layout
            .undesired_codes
            .iter()
            .map(|shape| {
                shape
                    .map(|c| {
                        let spec = MdsSpec::new(c.len, c.info, q)?;
                        match fault {
                            Fault::None => MdsCode::new(spec),
                            Fault::UncodedSideInformation => Ok(MdsCode::repetition(spec)),
                        }
                    })
                    .transpose()
            })
            .collect::<Result<_>>()?;
        let d = layout.desired_code;
        let desired = MdsCode::new(MdsSpec::new(d.len, d.info, q)?)?;
        Ok(Self { undesired, desired })
    }

    /// Code owning the codeword of an undesired block of `size`.
    pub fn for_size(&self, size: usize) -> Option<&MdsCode> {
        self.undesired.get(size - 1).and_then(Option::as_ref)
    }
}

/// What one database receives: `D` linear functionals over `(W_1; ...; W_K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub messages: usize,
    /// `D x (K L)`; columns `k L .. (k+1) L` act on message `k`.
    pub coefficients: Matrix,
}

impl Query {
    pub fn message_len(&self) -> usize {
        self.coefficients.cols() / self.messages
    }

    pub fn rows(&self) -> usize {
        self.coefficients.rows()
    }

    /// Coefficients acting on message `k`.
    pub fn segment(&self, k: usize) -> Matrix {
        let l = self.message_len();
        self.coefficients.slice_cols(k * l..(k + 1) * l).expect("segment in range")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub db: usize,
    pub modulus: FieldModulus,
    pub values: Vec<u64>,
}

/// Queries for all `M` databases. The desired index stays with the user.
#[derive(Clone, Debug)]
pub struct QueryPlan {
    layout: BlockLayout,
    fault: Fault,
    queries: Vec<Query>,
}

impl QueryPlan {
    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn desired(&self) -> usize {
        self.layout.desired()
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn fault(&self) -> Fault {
        self.fault
    }

    pub fn query(&self, db: usize) -> &Query {
        &self.queries[db]
    }
}

pub fn build_queries(params: &SchemeParams, desired: usize, secrets: &SchemeSecrets) -> Result<QueryPlan> {
    build_queries_with_fault(params, desired, secrets, Fault::None)
}

pub fn build_queries_with_fault(
    params: &SchemeParams,
    desired: usize,
    secrets: &SchemeSecrets,
    fault: Fault,
) -> Result<QueryPlan> {
    let layout = build_layout(params, desired)?;
    let codes = CodeBook::new(&layout, fault)?;
    check_secrets(params, secrets)?;
    let q = params.modulus();
    let (k_total, l, m) = (params.messages(), params.message_len(), params.databases());
    let d = layout.per_db_rows;

    // codewords[k][b]: coefficient rows of message k's codeword for undesired block b.
    let mut codewords: Vec<Vec<Option<Matrix>>> = vec![vec![None; layout.blocks.len()]; k_total];
    for (k, slices) in layout.secret_rows.iter().enumerate() {
        for slice in slices {
            let Some(b) = slice.block else { continue };
            let code = codes
                .for_size(layout.blocks[b].size())
                .ok_or_else(|| Error::Invariant(format!("no code for block {}", layout.blocks[b].subset)))?;
            let rows = secrets.matrices[k].slice_rows(slice.rows.clone())?;
            codewords[k][b] = Some(code.encode(&rows)?);
        }
    }
    let desired_word = codes.desired.encode(&secrets.matrices[desired])?;

    let mut queries: Vec<Matrix> = (0..m).map(|_| Matrix::zeros(d, k_total * l, q)).collect();
    for (b, block) in layout.blocks.iter().enumerate() {
        for (db, query) in queries.iter_mut().enumerate() {
            for (r, coord) in block.db_range(db).enumerate() {
                let row = query.row_mut(block.row_offset + r);
                for &k in block.subset.members() {
                    let src = match &block.role {
                        BlockRole::Undesired => codewords[k][b].as_ref().map(|w| w.row(coord)),
                        BlockRole::Desired { desired_offset, .. } if k == desired => {
                            Some(desired_word.row(desired_offset + coord))
                        }
                        BlockRole::Desired {
                            parent: Some(p),
                            parity_offset,
                            ..
                        } => codewords[k][*p].as_ref().map(|w| w.row(parity_offset + coord)),
                        BlockRole::Desired { parent: None, .. } => None,
                    }
                    .ok_or_else(|| {
                        Error::Invariant(format!("block {} has no coefficients for message {}", block.subset, k + 1))
                    })?;
                    row[k * l..(k + 1) * l].copy_from_slice(src);
                }
            }
        }
    }
    Ok(QueryPlan {
        layout,
        fault,
        queries: queries
            .into_iter()
            .map(|coefficients| Query {
                messages: k_total,
                coefficients,
            })
            .collect(),
    })
}

fn check_secrets(params: &SchemeParams, secrets: &SchemeSecrets) -> Result<()> {
    let l = params.message_len();
    if secrets.matrices.len() != params.messages() {
        return Err(Error::InvalidParams(format!(
            "{} secret matrices for {} messages",
            secrets.matrices.len(),
            params.messages()
        )));
    }
    for s in &secrets.matrices {
        if s.shape() != (l, l) {
            return Err(Error::ShapeMismatch {
                op: "secrets",
                left: (l, l),
                right: s.shape(),
            });
        }
        if s.modulus() != params.modulus() {
            return Err(Error::ModulusMismatch {
                left: params.modulus().value(),
                right: s.modulus().value(),
            });
        }
    }
    Ok(())
}

/// `Q_db * (W_1; ...; W_K)`.
pub fn answer_query(db: usize, query: &Query, store: &MessageStore) -> Result<Answer> {
    let values = answer_batch(query, &store.stacked())?.into_data();
    Ok(Answer {
        db,
        modulus: store.modulus(),
        values,
    })
}

/// Answers against several stacked stores at once (one column per store).
pub fn answer_batch(query: &Query, stacked: &Matrix) -> Result<Matrix> {
    query.coefficients.mat_mul(stacked)
}

/// Decoder for one `(layout, secrets)` pair. Holds `S_desired^-1` so it can
/// be reused across stores.
#[derive(Clone, Debug)]
pub struct Decoder {
    layout: BlockLayout,
    codes: CodeBook,
    secret_inverse: Matrix,
}

impl Decoder {
    pub fn new(params: &SchemeParams, desired: usize, secrets: &SchemeSecrets) -> Result<Self> {
        let layout = build_layout(params, desired)?;
        check_secrets(params, secrets)?;
        let codes = CodeBook::new(&layout, Fault::None)?;
        let secret_inverse = secrets.matrices[desired].invert().map_err(|e| match e {
            Error::Singular { .. } => Error::Invariant(format!("secret for message {} is singular", desired + 1)),
            e => e,
        })?;
        Ok(Self {
            layout,
            codes,
            secret_inverse,
        })
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn decode(&self, answers: &[Answer]) -> Result<Vec<u64>> {
        let batch: Vec<(usize, Matrix)> = answers
            .iter()
            .map(|a| (a.db, Matrix::column(a.modulus, &a.values)))
            .collect();
        Ok(self.decode_batch(&batch)?.into_data())
    }

    /// Decodes several stores at once; each answer is `D x S`, one column per
    /// store. Uses the `N` lowest database ids present.
    pub fn decode_batch(&self, answers: &[(usize, Matrix)]) -> Result<Matrix> {
        let params = &self.layout.params;
        let n = params.responders();
        let q = params.modulus();
        let mut sorted: Vec<&(usize, Matrix)> = answers.iter().collect();
        sorted.sort_by_key(|(db, _)| *db);
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidParams(format!("two answers from database {}", pair[0].0 + 1)));
            }
        }
        if sorted.len() < n {
            return Err(Error::NotEnoughAnswers {
                needed: n,
                got: sorted.len(),
            });
        }
        let chosen = &sorted[..n];
        let width = chosen[0].1.cols();
        for (db, a) in chosen {
            if *db >= params.databases() {
                return Err(Error::IndexOutOfRange {
                    index: *db,
                    limit: params.databases(),
                });
            }
            if a.shape() != (self.layout.per_db_rows, width) {
                return Err(Error::ShapeMismatch {
                    op: "decode",
                    left: (self.layout.per_db_rows, width),
                    right: a.shape(),
                });
            }
            if a.modulus() != q {
                return Err(Error::ModulusMismatch {
                    left: q.value(),
                    right: a.modulus().value(),
                });
            }
        }
        let dbs: Vec<usize> = chosen.iter().map(|(db, _)| *db).collect();
        // received[b]: block b's rows from the responders, stacked in db order.
        let mut received: Vec<Matrix> = self
            .layout
            .blocks
            .iter()
            .map(|block| {
                let rows: Vec<usize> = (block.row_offset..block.row_offset + block.per_db).collect();
                let parts = chosen
                    .iter()
                    .map(|(_, a)| a.select_rows(&rows))
                    .collect::<Result<Vec<_>>>()?;
                Matrix::vstack(&parts.iter().collect::<Vec<_>>())
            })
            .collect::<Result<_>>()?;

        // Strip aligned interference: recover each undesired block's summed
        // information symbols, re-encode its parity, subtract from the child.
        for (b, block) in self.layout.blocks.iter().enumerate() {
            if !matches!(block.role, BlockRole::Undesired) || block.is_empty() {
                continue;
            }
            let code = self
                .codes
                .for_size(block.size())
                .ok_or_else(|| Error::Invariant(format!("no code for block {}", block.subset)))?;
            let info_coords: Vec<usize> = dbs.iter().flat_map(|&db| block.db_range(db)).collect();
            let info = code.recover_info(&info_coords, &received[b]).map_err(singular_is_invariant)?;
            let Some(child) = self.layout.child_of(b) else { continue };
            let c = &self.layout.blocks[child];
            let BlockRole::Desired { parity_offset, .. } = c.role else {
                unreachable!("child blocks contain the desired message")
            };
            if c.is_empty() {
                continue;
            }
            let parity_rows: Vec<usize> = dbs
                .iter()
                .flat_map(|&db| c.db_range(db))
                .map(|i| parity_offset + i)
                .collect();
            let parity = code.generator().select_rows(&parity_rows)?.mat_mul(&info)?;
            received[child] = received[child].sub(&parity)?;
        }

        let mut coords = Vec::new();
        let mut parts = Vec::new();
        for (b, block) in self.layout.blocks.iter().enumerate() {
            if let BlockRole::Desired { desired_offset, .. } = block.role {
                coords.extend(dbs.iter().flat_map(|&db| block.db_range(db)).map(|i| desired_offset + i));
                parts.push(&received[b]);
            }
        }
        let desired_values = Matrix::vstack(&parts)?;
        let mixed = self
            .codes
            .desired
            .recover_info(&coords, &desired_values)
            .map_err(singular_is_invariant)?;
        self.secret_inverse.mat_mul(&mixed)
    }
}

fn singular_is_invariant(e: Error) -> Error {
    match e {
        Error::Singular { rank, expected } => {
            Error::Invariant(format!("decoding submatrix has rank {rank} of {expected}"))
        }
        e => e,
    }
}

/// Recovers the desired message from any `N` or more answers.
pub fn decode(params: &SchemeParams, desired: usize, secrets: &SchemeSecrets, answers: &[Answer]) -> Result<Vec<u64>> {
    Decoder::new(params, desired, secrets)?.decode(answers)
}

/// `L / (N D)` as an exact fraction.
pub fn achieved_rate(params: &SchemeParams) -> Ratio<u128> {
    Ratio::new(params.message_len() as u128, total_download(params) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn params(k: usize, n: usize, t: usize, m: usize) -> SchemeParams {
        SchemeParams::new(k, n, t, m).unwrap()
    }

    fn run(p: &SchemeParams, desired: usize, seed: u64, responders: &[usize]) -> (MessageStore, Vec<u64>) {
        let mut rng = SeededRng::new(seed);
        let secrets = sample_secrets(p, &mut rng);
        let store = MessageStore::random(p, &mut rng);
        let plan = build_queries(p, desired, &secrets).unwrap();
        let answers: Vec<Answer> = responders
            .iter()
            .map(|&db| answer_query(db, plan.query(db), &store).unwrap())
            .collect();
        let out = decode(p, desired, &secrets, &answers).unwrap();
        (store, out)
    }

    #[test]
    fn k2_n3_t2_decodes_from_fifteen_symbols() {
        let p = params(2, 3, 2, 3);
        let (store, out) = run(&p, 0, 1, &[0, 1, 2]);
        assert_eq!(out, store.message(0));
        assert_eq!(achieved_rate(&p), Ratio::new(3, 5));
        assert_eq!(total_download(&p), 15);
    }

    #[test]
    fn robust_any_three_of_five() {
        let p = params(2, 3, 2, 5);
        for subset in (0..5).combinations(3) {
            for desired in 0..2 {
                let (store, out) = run(&p, desired, 9, &subset);
                assert_eq!(out, store.message(desired), "{subset:?}");
            }
        }
    }

    #[test]
    fn extra_answers_use_lowest_ids() {
        let p = params(2, 2, 1, 4);
        let (store, out) = run(&p, 1, 3, &[3, 1, 2, 0]);
        assert_eq!(out, store.message(1));
    }

    #[test]
    fn single_message_is_raw_download() {
        let p = params(1, 2, 1, 2);
        let mut rng = SeededRng::new(5);
        let secrets = sample_secrets(&p, &mut rng);
        let store = MessageStore::random(&p, &mut rng);
        let plan = build_queries(&p, 0, &secrets).unwrap();
        assert_eq!(plan.query(0).rows(), 1);
        let answers: Vec<Answer> = (0..2).map(|db| answer_query(db, plan.query(db), &store).unwrap()).collect();
        // With M = N the desired code is square, so the answers are V S_1 W_1.
        let v = crate::mds::generator(MdsSpec::new(2, 2, p.modulus()).unwrap()).unwrap();
        let expected = v.mat_mul(&secrets.matrices[0]).unwrap().mat_mul(&store.stacked()).unwrap();
        let got: Vec<u64> = answers.iter().flat_map(|a| a.values.clone()).collect();
        assert_eq!(got, expected.into_data());
        assert_eq!(decode(&p, 0, &secrets, &answers).unwrap(), store.message(0));
    }

    #[test]
    fn block_supports_match_subsets() {
        let p = params(2, 3, 2, 3);
        let secrets = sample_secrets(&p, &mut SeededRng::new(2));
        let plan = build_queries(&p, 0, &secrets).unwrap();
        for query in plan.queries() {
            let a = query.segment(0);
            let b = query.segment(1);
            let touches = |m: &Matrix, r: usize| m.row(r).iter().any(|&x| x != 0);
            for r in 0..2 {
                assert!(touches(&a, r) && !touches(&b, r));
            }
            for r in 2..4 {
                assert!(!touches(&a, r) && touches(&b, r));
            }
            assert!(touches(&a, 4) && touches(&b, 4));
        }
    }

    #[test]
    fn side_information_parity_is_determined() {
        // The six raw message-2 rows determine the three mixed-row components.
        let p = params(2, 3, 2, 3);
        let secrets = sample_secrets(&p, &mut SeededRng::new(8));
        let plan = build_queries(&p, 0, &secrets).unwrap();
        let rows = |r: &[usize]| -> Matrix {
            let parts: Vec<Matrix> = plan.queries().iter().map(|qr| qr.segment(1).select_rows(r).unwrap()).collect();
            Matrix::vstack(&parts.iter().collect::<Vec<_>>()).unwrap()
        };
        let stacked = Matrix::vstack(&[&rows(&[2, 3]), &rows(&[4])]).unwrap();
        let code = MdsCode::new(MdsSpec::new(9, 6, p.modulus()).unwrap()).unwrap();
        let expected = code.encode(&secrets.matrices[1].slice_rows(0..6).unwrap()).unwrap();
        assert_eq!(stacked, expected);
    }

    #[test]
    fn undesired_coefficients_have_rank_t_n_pow() {
        for (k, n, t, m) in [(2, 3, 2, 3), (3, 3, 2, 3), (2, 4, 3, 5), (3, 2, 1, 3)] {
            let p = params(k, n, t, m);
            let secrets = sample_secrets(&p, &mut SeededRng::new(4));
            for desired in 0..k {
                let plan = build_queries(&p, desired, &secrets).unwrap();
                for msg in (0..k).filter(|&x| x != desired) {
                    let segs: Vec<Matrix> = plan.queries().iter().map(|qr| qr.segment(msg)).collect();
                    let all = Matrix::vstack(&segs.iter().collect::<Vec<_>>()).unwrap();
                    assert_eq!(all.rank(), t * n.pow(k as u32 - 1), "{p} desired {desired} msg {msg}");
                }
            }
        }
    }

    #[test]
    fn answers_are_linear_and_zero_on_zero() {
        let p = params(2, 2, 1, 2);
        let mut rng = SeededRng::new(6);
        let secrets = sample_secrets(&p, &mut rng);
        let plan = build_queries(&p, 0, &secrets).unwrap();
        let zero = answer_query(0, plan.query(0), &MessageStore::zeros(&p)).unwrap();
        assert!(zero.values.iter().all(|&x| x == 0));
        let s1 = MessageStore::random(&p, &mut rng);
        let s2 = MessageStore::random(&p, &mut rng);
        let q = p.modulus();
        let sum = MessageStore::new(
            q,
            (0..2)
                .map(|k| s1.message(k).iter().zip(s2.message(k)).map(|(&a, &b)| q.add(a, b)).collect())
                .collect(),
        )
        .unwrap();
        let a1 = answer_query(0, plan.query(0), &s1).unwrap().values;
        let a2 = answer_query(0, plan.query(0), &s2).unwrap().values;
        let a = answer_query(0, plan.query(0), &sum).unwrap().values;
        let expected: Vec<u64> = a1.iter().zip(&a2).map(|(&x, &y)| q.add(x, y)).collect();
        assert_eq!(a, expected);
    }

    #[test]
    fn answer_shape_mismatch() {
        let p = params(2, 2, 1, 2);
        let other = params(2, 3, 1, 3);
        let plan = build_queries(&p, 0, &sample_secrets(&p, &mut SeededRng::new(1))).unwrap();
        let store = MessageStore::zeros(&other);
        assert!(answer_query(0, plan.query(0), &store).is_err());
    }

    #[test]
    fn too_few_or_duplicate_answers() {
        let p = params(2, 3, 2, 4);
        let mut rng = SeededRng::new(2);
        let secrets = sample_secrets(&p, &mut rng);
        let store = MessageStore::random(&p, &mut rng);
        let plan = build_queries(&p, 0, &secrets).unwrap();
        let a: Vec<Answer> = (0..4).map(|db| answer_query(db, plan.query(db), &store).unwrap()).collect();
        assert_eq!(
            decode(&p, 0, &secrets, &a[..2]),
            Err(Error::NotEnoughAnswers { needed: 3, got: 2 })
        );
        let dup = vec![a[0].clone(), a[0].clone(), a[1].clone()];
        assert!(decode(&p, 0, &secrets, &dup).is_err());
    }

    #[test]
    fn secrets_are_deterministic_and_full_rank() {
        let p = params(2, 2, 1, 2);
        let a = sample_secrets(&p, &mut SeededRng::new(10));
        let b = sample_secrets(&p, &mut SeededRng::new(10));
        assert_eq!(a, b);
        assert_eq!(a.matrices.len(), 2);
        for s in &a.matrices {
            assert_eq!(s.shape(), (4, 4));
            assert_eq!(s.rank(), 4);
        }
        assert_ne!(a.matrices[0], a.matrices[1]);
    }

    #[test]
    fn golden_rates() {
        for ((k, n, t), (num, den), download) in [
            ((2, 3, 2), (3, 5), 15),
            ((2, 4, 2), (2, 3), 24),
            ((2, 4, 3), (4, 7), 28),
            ((3, 3, 2), (9, 19), 57),
        ] {
            let p = params(k, n, t, n);
            assert_eq!(achieved_rate(&p), Ratio::new(num, den));
            assert_eq!(total_download(&p), download);
        }
        assert_eq!(achieved_rate(&params(3, 3, 3, 3)), Ratio::new(1, 3));
    }

    #[test]
    fn batched_decode_matches_single() {
        let p = params(3, 2, 1, 3);
        let mut rng = SeededRng::new(12);
        let secrets = sample_secrets(&p, &mut rng);
        let stores: Vec<MessageStore> = (0..4).map(|_| MessageStore::random(&p, &mut rng)).collect();
        let stacked = MessageStore::stack_columns(&stores).unwrap();
        let plan = build_queries(&p, 2, &secrets).unwrap();
        let answers: Vec<(usize, Matrix)> = [2, 0]
            .iter()
            .map(|&db| (db, answer_batch(plan.query(db), &stacked).unwrap()))
            .collect();
        let out = Decoder::new(&p, 2, &secrets).unwrap().decode_batch(&answers).unwrap();
        for (c, store) in stores.iter().enumerate() {
            let col: Vec<u64> = (0..out.rows()).map(|r| out.raw(r, c)).collect();
            assert_eq!(col, store.message(2));
        }
    }

    #[test]
    fn degenerate_t_equals_n() {
        let p = params(3, 2, 2, 3);
        assert_eq!(achieved_rate(&p), Ratio::new(1, 3));
        assert_eq!(total_download(&p), 3 * p.message_len());
        for subset in (0..3).combinations(2) {
            for desired in 0..3 {
                let (store, out) = run(&p, desired, 21, &subset);
                assert_eq!(out, store.message(desired));
            }
        }
    }

    #[test]
    fn broken_plan_repeats_secret_rows() {
        let p = params(2, 2, 1, 2);
        let secrets = sample_secrets(&p, &mut SeededRng::new(3));
        let plan = build_queries_with_fault(&p, 0, &secrets, Fault::UncodedSideInformation).unwrap();
        // Database 0 gets raw row 0 of S_2 in block {2} and again as parity in block {1,2}.
        let seg = plan.query(0).segment(1);
        let b = plan.layout().blocks.iter().position(|b| b.subset.members() == [1]).unwrap();
        let c = plan.layout().child_of(b).unwrap();
        let row_b = plan.layout().blocks[b].row_offset;
        let row_c = plan.layout().blocks[c].row_offset;
        assert_eq!(seg.row(row_b), seg.row(row_c));
    }
}
