//! Standoff corpus files: one JSON document record per line.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Corpus, Document};
use crate::error::{Error, Result};

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    read_corpus(File::open(path)?)
}

pub fn read_corpus(reader: impl Read) -> Result<Corpus> {
    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut doc: Document = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            doc: loose_id(&line),
            message: e.to_string(),
        })?;
        doc.validate().map_err(|invariant| Error::Schema {
            line: line_no,
            doc: doc.id.clone(),
            invariant,
        })?;
        doc.fill_missing_annotations();
        if !seen.insert(doc.id.clone()) {
            return Err(Error::Schema {
                line: line_no,
                doc: doc.id,
                invariant: "document ids must be unique".into(),
            });
        }
        documents.push(doc);
    }
    Ok(Corpus::new(documents))
}

fn loose_id(line: &str) -> Option<String> {
    let value: serde_json::Value = serde_json::from_str(line).ok()?;
    value.get("id")?.as_str().map(str::to_owned)
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_corpus(corpus, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_corpus(corpus: &Corpus, mut out: impl Write) -> Result<()> {
    for doc in &corpus.documents {
        serde_json::to_writer(&mut out, doc).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
