use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use super::types::{Category, Dataset, EmailDoc, Embedding, JudgementRecord, Phase};
use super::DataError;

pub const EMBEDDING_MAGIC: &[u8; 4] = b"IBIS";

const JUDGEMENT_HEADER: [&str; 9] = [
    "participant_id",
    "trial_index",
    "email_id",
    "phase",
    "decision",
    "confidence_raw",
    "confidence_scale_max",
    "reaction_time_ms",
    "feedback_shown",
];

/// The three files that make up a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetPaths {
    pub emails: PathBuf,
    pub embeddings: PathBuf,
    pub judgements: PathBuf,
}

impl DatasetPaths {
    /// Conventional file names inside one directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        Self {
            emails: dir.join("emails.jsonl"),
            embeddings: dir.join("embeddings.bin"),
            judgements: dir.join("judgements.csv"),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DataError + '_ {
    move |source| DataError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn malformed(path: &Path, line: usize, message: impl Into<String>) -> DataError {
    DataError::MalformedRecord {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn load_dataset(paths: &DatasetPaths) -> Result<Dataset, DataError> {
    let emails = read_emails(&paths.emails)?;
    let embeddings = read_embeddings(&paths.embeddings)?;
    let judgements = read_judgements(&paths.judgements)?;
    // Line numbers for dangling references point into the judgements file.
    let known: std::collections::HashSet<&str> = emails.iter().map(|e| e.id.as_str()).collect();
    if let Some((n, j)) = judgements
        .iter()
        .enumerate()
        .find(|(_, j)| !known.contains(j.email_id.as_str()))
    {
        return Err(DataError::DanglingJudgement {
            line: n + 2,
            email_id: j.email_id.clone(),
        });
    }
    Dataset::new(emails, embeddings, judgements)
}

pub fn write_dataset(dataset: &Dataset, paths: &DatasetPaths) -> Result<(), DataError> {
    write_emails(&paths.emails, dataset.emails())?;
    let embeddings: Vec<&Embedding> = dataset.embeddings().collect();
    write_embeddings_binary(&paths.embeddings, &embeddings)?;
    write_judgements(&paths.judgements, dataset.judgements())
}

pub fn read_emails(path: &Path) -> Result<Vec<EmailDoc>, DataError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let email: EmailDoc = serde_json::from_str(&line).map_err(|e| malformed(path, n + 1, e.to_string()))?;
        if email.id.is_empty() {
            return Err(malformed(path, n + 1, "empty id"));
        }
        out.push(email);
    }
    Ok(out)
}

pub fn write_emails(path: &Path, emails: &[EmailDoc]) -> Result<(), DataError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    for email in emails {
        let line = serde_json::to_string(email).expect("email serializes");
        writeln!(w, "{line}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads the binary format, or the `id,v0,v1,...` CSV fallback when the file
/// does not start with the magic bytes.
pub fn read_embeddings(path: &Path) -> Result<Vec<Embedding>, DataError> {
    let mut bytes = Vec::new();
    File::open(path)
        .map_err(io_err(path))?
        .read_to_end(&mut bytes)
        .map_err(io_err(path))?;
    if bytes.starts_with(EMBEDDING_MAGIC) {
        read_embeddings_binary(path, &bytes)
    } else {
        read_embeddings_csv(path, &bytes)
    }
}

fn read_embeddings_binary(path: &Path, bytes: &[u8]) -> Result<Vec<Embedding>, DataError> {
    let mut cur = &bytes[4..];
    let count = cur
        .read_u32::<LittleEndian>()
        .map_err(|_| malformed(path, 0, "truncated header"))? as usize;
    let dim = cur
        .read_u32::<LittleEndian>()
        .map_err(|_| malformed(path, 0, "truncated header"))? as usize;
    let n_floats = count
        .checked_mul(dim)
        .ok_or_else(|| malformed(path, 0, "count × dimension overflows"))?;
    if cur.len() < n_floats * 4 {
        return Err(malformed(path, 0, "truncated vector block"));
    }
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let mut values = Vec::with_capacity(dim);
        for _ in 0..dim {
            values.push(f64::from(cur.read_f32::<LittleEndian>().expect("length checked")));
        }
        rows.push(values);
    }
    let ids = std::str::from_utf8(cur).map_err(|_| malformed(path, 0, "ids are not UTF-8"))?;
    let mut id_lines = ids.split_terminator('\n');
    let mut out = Vec::with_capacity(count);
    for (i, values) in rows.into_iter().enumerate() {
        let id = id_lines.next().ok_or_else(|| malformed(path, i + 1, "missing id"))?;
        if id.is_empty() {
            return Err(malformed(path, i + 1, "empty id"));
        }
        out.push(Embedding::new(id, values));
    }
    if id_lines.next().is_some() {
        return Err(malformed(path, count + 1, "more ids than vectors"));
    }
    Ok(out)
}

fn read_embeddings_csv(path: &Path, bytes: &[u8]) -> Result<Vec<Embedding>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes);
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| malformed(path, n + 1, e.to_string()))?;
        let mut fields = rec.iter();
        let Some(id) = fields.next() else { continue };
        let parsed: Result<Vec<f64>, _> = fields.map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(values) => out.push(Embedding::new(id.trim(), values)),
            // A non-numeric first row is a header.
            Err(_) if n == 0 => continue,
            Err(e) => return Err(malformed(path, n + 1, e.to_string())),
        }
    }
    Ok(out)
}

/// Values are narrowed to f32, so vectors that originated from f32 round-trip
/// bit-exactly.
pub fn write_embeddings_binary(path: &Path, embeddings: &[&Embedding]) -> Result<(), DataError> {
    let dim = embeddings.first().map(|e| e.dim()).unwrap_or(0);
    let mut buf = Vec::with_capacity(12 + embeddings.len() * (dim * 4 + 8));
    buf.extend_from_slice(EMBEDDING_MAGIC);
    buf.write_u32::<LittleEndian>(embeddings.len() as u32).unwrap();
    buf.write_u32::<LittleEndian>(dim as u32).unwrap();
    for emb in embeddings {
        if emb.dim() != dim {
            return Err(DataError::DimensionMismatch {
                id: emb.email_id.clone(),
                expected: dim,
                found: emb.dim(),
            });
        }
        for &v in &emb.values {
            buf.write_f32::<LittleEndian>(v as f32).unwrap();
        }
    }
    for emb in embeddings {
        buf.extend_from_slice(emb.email_id.as_bytes());
        buf.push(b'\n');
    }
    std::fs::write(path, buf).map_err(io_err(path))
}

#[derive(Debug, Serialize, Deserialize)]
struct JudgementRow {
    participant_id: String,
    trial_index: u32,
    email_id: String,
    phase: String,
    decision: String,
    confidence_raw: f64,
    confidence_scale_max: f64,
    reaction_time_ms: f64,
    feedback_shown: String,
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

pub fn read_judgements(path: &Path) -> Result<Vec<JudgementRecord>, DataError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(BufReader::new(file));
    let headers = rdr.headers().map_err(|e| malformed(path, 1, e.to_string()))?.clone();
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != JUDGEMENT_HEADER {
        return Err(malformed(
            path,
            1,
            format!("expected header `{}`", JUDGEMENT_HEADER.join(",")),
        ));
    }
    let mut out = Vec::new();
    for (n, row) in rdr.deserialize::<JudgementRow>().enumerate() {
        let line = n + 2;
        let row = row.map_err(|e| malformed(path, line, e.to_string()))?;
        let phase: Phase = row.phase.parse().map_err(|e| malformed(path, line, e))?;
        let decision: Category = row.decision.parse().map_err(|e| malformed(path, line, e))?;
        let feedback_shown = parse_bool(&row.feedback_shown)
            .ok_or_else(|| malformed(path, line, "feedback_shown must be true/false"))?;
        if !(row.confidence_scale_max > 0.0) || !row.confidence_raw.is_finite() {
            return Err(malformed(path, line, "confidence scale must be positive"));
        }
        if !(row.reaction_time_ms > 0.0) || !row.reaction_time_ms.is_finite() {
            return Err(malformed(path, line, "reaction_time_ms must be positive"));
        }
        if row.email_id.is_empty() || row.participant_id.is_empty() {
            return Err(malformed(path, line, "empty id"));
        }
        out.push(JudgementRecord {
            participant_id: row.participant_id,
            trial_index: row.trial_index,
            email_id: row.email_id,
            phase,
            decision,
            confidence: (row.confidence_raw / row.confidence_scale_max).clamp(0.0, 1.0),
            confidence_raw: row.confidence_raw,
            confidence_scale_max: row.confidence_scale_max,
            reaction_time_ms: row.reaction_time_ms,
            correct: false,
            feedback_shown,
        });
    }
    Ok(out)
}

pub fn write_judgements(path: &Path, records: &[JudgementRecord]) -> Result<(), DataError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    for j in records {
        w.serialize(JudgementRow {
            participant_id: j.participant_id.clone(),
            trial_index: j.trial_index,
            email_id: j.email_id.clone(),
            phase: j.phase.as_str().to_string(),
            decision: j.decision.as_str().to_string(),
            confidence_raw: j.confidence_raw,
            confidence_scale_max: j.confidence_scale_max,
            reaction_time_ms: j.reaction_time_ms,
            feedback_shown: j.feedback_shown.to_string(),
        })
        .map_err(|e| DataError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(e),
        })?;
    }
    w.flush().map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Author, SemanticFeatures, Style};

    fn email(id: &str, category: Category) -> EmailDoc {
        EmailDoc {
            id: id.into(),
            body: format!("body of {id}"),
            category,
            author: Author::HumanExpert,
            style: Style::Plain,
            semantic: SemanticFeatures::default(),
        }
    }

    fn write_minimal(dir: &Path, judgements: &str, embeddings: &[(&str, Vec<f64>)]) -> DatasetPaths {
        let paths = DatasetPaths::in_dir(dir);
        write_emails(
            &paths.emails,
            &[email("a", Category::Phishing), email("b", Category::Ham)],
        )
        .unwrap();
        let embs: Vec<Embedding> = embeddings
            .iter()
            .map(|(id, v)| Embedding::new(*id, v.clone()))
            .collect();
        // Mixed dimensions cannot be written in binary; use the CSV fallback.
        let mut csv = String::new();
        for e in &embs {
            csv.push_str(&e.email_id);
            for v in &e.values {
                csv.push_str(&format!(",{v}"));
            }
            csv.push('\n');
        }
        std::fs::write(&paths.embeddings, csv).unwrap();
        std::fs::write(&paths.judgements, judgements).unwrap();
        paths
    }

    const HEADER: &str = "participant_id,trial_index,email_id,phase,decision,confidence_raw,confidence_scale_max,reaction_time_ms,feedback_shown\n";

    #[test]
    fn loads_minimal_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let j = format!(
            "{HEADER}p1,0,a,pre_train,phishing,3,5,1200,false\np1,1,b,train,phishing,5,5,900,true\np2,0,b,train,ham,1,5,2000,true\n"
        );
        let paths = write_minimal(
            dir.path(),
            &j,
            &[("a", vec![1.0, 0.0, 0.0, 0.5]), ("b", vec![0.0, 1.0, 0.0, 0.5])],
        );
        let ds = load_dataset(&paths).unwrap();
        assert_eq!(ds.dimension(), 4);
        assert_eq!(ds.judgements().len(), 3);
        assert!(ds.judgements()[0].correct);
        assert!(!ds.judgements()[1].correct);
        assert!((ds.judgements()[0].confidence - 0.6).abs() < 1e-12);
        assert_eq!(ds.participants(), vec!["p1", "p2"]);
    }

    #[test]
    fn dangling_judgement_is_reported_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let j = format!("{HEADER}p1,0,a,train,ham,1,1,100,true\np1,1,zz,train,ham,1,1,100,true\n");
        let paths = write_minimal(dir.path(), &j, &[("a", vec![1.0; 4]), ("b", vec![2.0; 4])]);
        match load_dataset(&paths) {
            Err(DataError::DanglingJudgement { line, email_id }) => {
                assert_eq!(email_id, "zz");
                assert_eq!(line, 3);
            }
            other => panic!("expected DanglingJudgement, got {other:?}"),
        }
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_minimal(dir.path(), HEADER, &[("a", vec![1.0; 4]), ("b", vec![1.0; 5])]);
        assert!(matches!(
            load_dataset(&paths),
            Err(DataError::DimensionMismatch {
                expected: 4,
                found: 5,
                ..
            })
        ));
    }

    #[test]
    fn missing_embedding_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_minimal(dir.path(), HEADER, &[("a", vec![1.0; 4])]);
        assert!(matches!(
            load_dataset(&paths),
            Err(DataError::MissingEmbedding(id)) if id == "b"
        ));
    }

    #[test]
    fn malformed_row_carries_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let j = format!("{HEADER}p1,0,a,train,ham,1,1,100,true\np1,1,a,train,maybe,1,1,100,true\n");
        let paths = write_minimal(dir.path(), &j, &[("a", vec![1.0; 4]), ("b", vec![2.0; 4])]);
        assert!(matches!(
            load_dataset(&paths),
            Err(DataError::MalformedRecord { line: 3, .. })
        ));
    }

    #[test]
    fn wrong_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_minimal(
            dir.path(),
            "participant,trial\n",
            &[("a", vec![1.0; 4]), ("b", vec![2.0; 4])],
        );
        assert!(matches!(
            load_dataset(&paths),
            Err(DataError::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn unsorted_trials_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let j = format!("{HEADER}p1,3,a,train,ham,1,1,100,true\np1,2,b,train,ham,1,1,100,true\n");
        let paths = write_minimal(dir.path(), &j, &[("a", vec![1.0; 4]), ("b", vec![2.0; 4])]);
        assert!(matches!(
            load_dataset(&paths),
            Err(DataError::UnsortedTrials { trial_index: 2, .. })
        ));
    }

    #[test]
    fn binary_embeddings_round_trip_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("e.bin");
        let a = Embedding::new("a", vec![0.25, -1.5, 3.0]);
        let b = Embedding::new("b", vec![1.0, 2.0, f64::from(0.1f32)]);
        write_embeddings_binary(&p, &[&a, &b]).unwrap();
        let first = std::fs::read(&p).unwrap();
        assert_eq!(&first[..4], b"IBIS");
        assert_eq!(u32::from_le_bytes(first[4..8].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(first[8..12].try_into().unwrap()), 3);
        assert!(first.ends_with(b"a\nb\n"));
        let back = read_embeddings(&p).unwrap();
        assert_eq!(back, vec![a, b]);
        let refs: Vec<&Embedding> = back.iter().collect();
        write_embeddings_binary(&p, &refs).unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), first);
    }

    #[test]
    fn truncated_binary_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("e.bin");
        let mut bytes = b"IBIS".to_vec();
        bytes.extend_from_slice(&2u32.to_le_bytes());
        bytes.extend_from_slice(&3u32.to_le_bytes());
        bytes.extend_from_slice(&[0u8; 8]);
        std::fs::write(&p, bytes).unwrap();
        assert!(matches!(read_embeddings(&p), Err(DataError::MalformedRecord { .. })));
    }

    #[test]
    fn csv_embeddings_accept_header_row() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("e.csv");
        std::fs::write(&p, "id,v0,v1\na,1,2\nb,3,4\n").unwrap();
        let embs = read_embeddings(&p).unwrap();
        assert_eq!(embs.len(), 2);
        assert_eq!(embs[1].values, vec![3.0, 4.0]);
    }
}
