import { readFileSync } from 'node:fs';

export interface ExtractRecord {
  key: string;
  contextText: string;
  responseText: string;
}

function asText(value: unknown, line: number, field: string): string {
  if (typeof value !== 'string') {
    throw new Error(`line ${line}: ${field} must be a string`);
  }
  return value;
}

function joinTokens(value: unknown, line: number, field: string): string {
  if (!Array.isArray(value)) {
    throw new Error(`line ${line}: ${field} must be an array`);
  }
  return value.flat(1).map((t) => asText(t, line, field)).join(' ');
}

// Reads one record per JSONL line. Two row shapes are accepted:
//  - preprocessed rows {key, response_tokens, context_tokens[, label]}, the
//    default input (the pipeline's preprocess subcommand writes these);
//  - raw rows {response, context[, id, label]} as a convenience, keyed by id
//    when present and by t<line> (0-based, blank lines counted) otherwise.
export function readRecords(path: string): ExtractRecord[] {
  const text = readFileSync(path, 'utf8');
  const records: ExtractRecord[] = [];
  const seen = new Set<string>();
  const lines = text.split('\n');
  for (let idx = 0; idx < lines.length; idx++) {
    if (lines[idx].trim() === '') {
      continue;
    }
    const lineNo = idx + 1;
    let row: any;
    try {
      row = JSON.parse(lines[idx]);
    } catch {
      throw new Error(`${path}: line ${lineNo} is not valid JSON`);
    }
    let record: ExtractRecord;
    if (row.response_tokens !== undefined) {
      record = {
        key: asText(row.key, lineNo, 'key'),
        contextText: joinTokens(row.context_tokens ?? [], lineNo, 'context_tokens'),
        responseText: joinTokens(row.response_tokens, lineNo, 'response_tokens'),
      };
    } else if (row.response !== undefined) {
      const turns = row.context ?? [];
      if (!Array.isArray(turns)) {
        throw new Error(`line ${lineNo}: context must be an array`);
      }
      record = {
        key: row.id != null ? asText(row.id, lineNo, 'id') : `t${idx}`,
        contextText: turns.map((t: unknown) => asText(t, lineNo, 'context')).join(' '),
        responseText: asText(row.response, lineNo, 'response'),
      };
    } else {
      throw new Error(`line ${lineNo}: row has neither response_tokens nor response`);
    }
    if (seen.has(record.key)) {
      throw new Error(`${path}: duplicate record key ${record.key}`);
    }
    seen.add(record.key);
    records.push(record);
  }
  return records;
}
