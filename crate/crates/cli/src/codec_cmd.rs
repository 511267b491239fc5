use std::io::{Read, Write};

use literate_core::codec::{
    decode_bracketed, decode_layout_quantized, dequantize_page, CodecConfig,
    QuantizedBox, QuantizedLine, TokenStream,
};
use literate_core::types::PageDraft;
use literate_core::PageDocument;
use serde_json::{json, Value};

use crate::{CmdResult, CodecCommand, CodecIo, Failure, Format, EXIT_OK};

fn read_input(io: &CodecIo, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut s = String::new();
    match &io.input {
        Some(p) => {
            s = std::fs::read_to_string(p).map_err(|e| Failure::fatal(format!("{}: {e}", p.display())))?;
        }
        None => {
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::fatal(format!("stdin: {e}")))?;
        }
    }
    Ok(s)
}

fn write_output(io: &CodecIo, stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &io.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::fatal(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::fatal(format!("stdout: {e}"))),
    }
}

fn quantized_to_json(lines: &[QuantizedLine]) -> String {
    let lines: Vec<Value> = lines
        .iter()
        .map(|l| json!({"bins": l.bins.to_array(), "text": l.text}))
        .collect();
    json!({ "lines": lines }).to_string()
}

fn quantized_from_json(v: &Value, cfg: &CodecConfig) -> Result<Vec<QuantizedLine>, String> {
    let lines = v
        .get("lines")
        .and_then(Value::as_array)
        .ok_or("expected a `lines` array")?;
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let bins: [u32; 4] = serde_json::from_value(l.get("bins").cloned().unwrap_or(Value::Null))
                .map_err(|e| format!("line {i}: bins: {e}"))?;
            let text = l
                .get("text")
                .and_then(Value::as_str)
                .ok_or_else(|| format!("line {i}: missing text"))?;
            if text.contains(['\n', '\r']) {
                return Err(format!("line {i}: newline in text"));
            }
            let bins = QuantizedBox::new(bins, cfg).map_err(|e| format!("line {i}: {e}"))?;
            Ok(QuantizedLine {
                bins,
                text: text.to_owned(),
            })
        })
        .collect()
}

fn encode(io: &CodecIo, cfg: &CodecConfig, input: &str) -> Result<String, Failure> {
    let v: Value = serde_json::from_str(input)
        .map_err(|e| Failure::data(e.to_string()))?;
    let quantized = if v.get("width").is_some() {
        let draft: PageDraft = serde_json::from_value(v).map_err(|e| Failure::data(format!("page: {e}")))?;
        let page = PageDocument::try_from(draft).map_err(|e| Failure::data(e.to_string()))?;
        literate_core::codec::quantize_page(&page, cfg).map_err(|e| Failure::data(e.to_string()))?
    } else {
        quantized_from_json(&v, cfg).map_err(Failure::data)?
    };
    Ok(match io.format {
        Format::Bracketed => literate_core::codec::bracketed::encode_quantized(&quantized),
        Format::Tokens => literate_core::codec::tokens::encode_quantized(&quantized).to_json(),
    })
}

fn decode(io: &CodecIo, cfg: &CodecConfig, size: Option<(u32, u32)>, input: &str) -> Result<String, Failure> {
    let lines = match io.format {
        Format::Bracketed => decode_bracketed(input, cfg).map_err(|e| Failure::data(e.to_string()))?,
        Format::Tokens => {
            let stream = TokenStream::from_json(input.trim_end())
                .map_err(|e| Failure::data(e.to_string()))?;
            decode_layout_quantized(&stream, cfg).map_err(|e| Failure::data(e.to_string()))?
        }
    };
    match size {
        None => Ok(quantized_to_json(&lines)),
        Some((w, h)) => {
            let page = dequantize_page(&lines, w, h, cfg).map_err(|e| Failure::data(e.to_string()))?;
            Ok(serde_json::to_string(&page).expect("pages serialize"))
        }
    }
}

pub(crate) fn run(cmd: CodecCommand, stdin: &mut dyn Read, stdout: &mut dyn Write) -> CmdResult {
    let (io, size, encoding) = match cmd {
        CodecCommand::Encode { io } => (io, None, true),
        CodecCommand::Decode { io, width, height } => (io, width.zip(height), false),
    };
    let cfg = CodecConfig::new(io.bins).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some((0, _) | (_, 0)) = size {
        return Err(Failure::usage("--width and --height must be positive"));
    }
    let input = read_input(&io, stdin)?;
    let out = if encoding {
        encode(&io, &cfg, &input)?
    } else {
        decode(&io, &cfg, size, &input)?
    };
    write_output(&io, stdout, &out)?;
    Ok(EXIT_OK)
}
