import { readFileSync } from 'fs'

export interface Table {
  header: string[]
  rows: number[][]
}

/** Parse simple numeric CSV (header row + numeric data rows, no quoting). */
export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0)
  if (lines.length === 0) {
    throw new Error('empty CSV: no header row')
  }
  const header = lines[0].split(',').map((h) => h.trim())
  const rows = lines.slice(1).map((line, i) => {
    const fields = line.split(',')
    if (fields.length !== header.length) {
      throw new Error(`CSV row ${i + 2} has ${fields.length} fields, expected ${header.length}`)
    }
    return fields.map((f) => {
      const v = Number(f)
      if (!Number.isFinite(v)) {
        throw new Error(`CSV row ${i + 2}: non-numeric value ${JSON.stringify(f)}`)
      }
      return v
    })
  })
  if (rows.length === 0) {
    throw new Error('empty CSV: header but no data rows')
  }
  return { header, rows }
}

export function readTable(path: string): Table {
  return parseCsv(readFileSync(path, 'utf8'))
}

/** Resolve required column names to indices, naming the schema on failure. */
export function requireColumns(table: Table, names: string[], schema: string): number[] {
  const missing = names.filter((n) => !table.header.includes(n))
  if (missing.length > 0) {
    throw new Error(
      `missing column(s) ${missing.join(', ')}; expected schema: ${schema} ` +
        `(got: ${table.header.join(', ')})`
    )
  }
  return names.map((n) => table.header.indexOf(n))
}

/** All column indices whose name matches the prefix, in header order. */
export function prefixColumns(table: Table, prefix: string): number[] {
  const idx = table.header
    .map((h, i) => [h, i] as const)
    .filter(([h]) => h.startsWith(prefix))
    .map(([, i]) => i)
  return idx
}

export function column(table: Table, index: number): number[] {
  return table.rows.map((r) => r[index])
}
