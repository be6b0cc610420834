use std::io::{Cursor, Read};

/// Errors opening a zipped GDELT export.
#[derive(Debug, thiserror::Error)]
pub enum ContainerError {
    #[error("corrupt zip archive: {0}")]
    Corrupt(String),
    #[error("expected exactly one file in the archive, found {0}")]
    MemberCount(usize),
}

const ZIP_MAGIC: &[u8] = b"PK\x03\x04";

/// Decompress the single member of a GDELT `*.zip` export.
pub fn open_export_container(archive: &[u8]) -> Result<Vec<u8>, ContainerError> {
    let mut zip = zip::ZipArchive::new(Cursor::new(archive)).map_err(|e| ContainerError::Corrupt(e.to_string()))?;
    let files: Vec<usize> = (0..zip.len())
        .filter(|&i| zip.by_index(i).map(|f| f.is_file()).unwrap_or(true))
        .collect();
    if files.len() != 1 {
        return Err(ContainerError::MemberCount(files.len()));
    }
    let mut member = zip
        .by_index(files[0])
        .map_err(|e| ContainerError::Corrupt(e.to_string()))?;
    let mut out = Vec::with_capacity(member.size() as usize);
    member
        .read_to_end(&mut out)
        .map_err(|e| ContainerError::Corrupt(e.to_string()))?;
    Ok(out)
}

/// Pass plain text through; unzip anything starting with the zip magic.
pub fn read_maybe_zipped(bytes: Vec<u8>) -> Result<Vec<u8>, ContainerError> {
    if bytes.starts_with(ZIP_MAGIC) {
        open_export_container(&bytes)
    } else {
        Ok(bytes)
    }
}
