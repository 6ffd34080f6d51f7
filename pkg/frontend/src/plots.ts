import { writeFileSync } from 'fs'
import { z } from 'zod'

import { column, prefixColumns, readTable, requireColumns, Table } from './csv.js'
import { logLogFit } from './fit.js'
import { Figure, PALETTE } from './svg.js'

export const plotSpecSchema = z.object({
  kind: z.enum(['cascade', 'norm-growth', 'scaling']),
  input: z.string(),
  output: z.string(),
  title: z.string().optional(),
  referenceSlope: z.number().optional(),
})

export type PlotSpec = z.infer<typeof plotSpecSchema>

export interface RenderResult {
  output: string
  /** Fitted log-log slope (scaling plots only). */
  slope?: number
}

export function parseSpec(obj: unknown): PlotSpec {
  const res = plotSpecSchema.safeParse(obj)
  if (!res.success) {
    throw new Error(`invalid plot spec: ${res.error.issues.map((i) => i.message).join('; ')}`)
  }
  if (!res.data.output.endsWith('.svg')) {
    throw new Error('output must be an .svg path (vector output only)')
  }
  return res.data
}

/** Stacked per-generation mass shares over time.
 * Expected schema: t, gen_mass_1 .. gen_mass_P [, ...]. */
function renderCascade(spec: PlotSpec, table: Table): RenderResult {
  const [ti] = requireColumns(table, ['t'], 't, gen_mass_1..gen_mass_P, ...')
  const genIdx = prefixColumns(table, 'gen_mass_')
  if (genIdx.length === 0) {
    throw new Error(
      `missing column(s) gen_mass_*; expected schema: t, gen_mass_1..gen_mass_P (got: ${table.header.join(', ')})`
    )
  }
  const t = column(table, ti)
  const gens = genIdx.map((i) => column(table, i))
  const totals = t.map((_, k) => gens.reduce((acc, g) => acc + g[k], 0))
  const shares = gens.map((g) => g.map((v, k) => (totals[k] > 0 ? v / totals[k] : 0)))

  const fig = new Figure()
  const x = fig.xscale('linear', Math.min(...t), Math.max(...t))
  const y = fig.yscale('linear', 0, 1)
  fig.title(spec.title ?? 'Per-generation mass shares')
  fig.axes(x, y, 'time', 'mass share')
  let lower = t.map(() => 0)
  shares.forEach((s, j) => {
    const upper = lower.map((v, k) => v + s[k])
    fig.band(t, lower, upper, x, y, PALETTE[j % PALETTE.length])
    lower = upper
  })
  fig.legend(gens.map((_, j) => [`generation ${j + 1}`, PALETTE[j % PALETTE.length]]))
  writeFileSync(spec.output, fig.render())
  return { output: spec.output }
}

/** Weighted-norm growth curve. Expected schema: t, hs_norm [, ...]. */
function renderNormGrowth(spec: PlotSpec, table: Table): RenderResult {
  const [ti, hi] = requireColumns(table, ['t', 'hs_norm'], 't, ..., hs_norm, ...')
  const t = column(table, ti)
  const hs = column(table, hi)
  const fig = new Figure()
  const x = fig.xscale('linear', Math.min(...t), Math.max(...t))
  const lo = Math.min(...hs)
  const hiv = Math.max(...hs)
  const pad = 0.05 * (hiv - lo || 1)
  const y = fig.yscale('linear', lo - pad, hiv + pad)
  fig.title(spec.title ?? 'Weighted-norm growth')
  fig.axes(x, y, 'time', 'h^s norm')
  fig.polyline(t, hs, x, y, PALETTE[0], 2)
  writeFileSync(spec.output, fig.render())
  return { output: spec.output }
}

/** Log-log deviation against N with fitted slope annotation.
 * Expected schema: n, deviation [, ...]. */
function renderScaling(spec: PlotSpec, table: Table): RenderResult {
  const [ni, di] = requireColumns(table, ['n', 'deviation'], 'n, deviation, ...')
  const n = column(table, ni)
  const dev = column(table, di)
  const fit = logLogFit(n, dev)
  const fig = new Figure()
  const x = fig.xscale('log', Math.min(...n) / 1.3, Math.max(...n) * 1.3)
  const y = fig.yscale('log', Math.min(...dev) / 2, Math.max(...dev) * 2)
  fig.title(spec.title ?? 'Deviation scaling')
  fig.axes(x, y, 'N', 'sup deviation')
  const xsLine = [Math.min(...n), Math.max(...n)]
  const fitted = xsLine.map((v) => Math.exp(fit.intercept + fit.slope * Math.log(v)))
  fig.polyline(xsLine, fitted, x, y, PALETTE[1], 1.5)
  fig.dots(n, dev, x, y, PALETTE[0])
  fig.note(`fitted slope ${fit.slope.toFixed(2)}`)
  if (spec.referenceSlope !== undefined) {
    const anchor = dev[0]
    const ref = xsLine.map((v) => anchor * (v / n[0]) ** spec.referenceSlope!)
    fig.polyline(xsLine, ref, x, y, '#999', 1)
    fig.note(`reference slope ${spec.referenceSlope.toFixed(2)}`, 0.55, 0.2)
  }
  writeFileSync(spec.output, fig.render())
  return { output: spec.output, slope: fit.slope }
}

export function render(rawSpec: unknown): RenderResult {
  const spec = parseSpec(rawSpec)
  const table = readTable(spec.input)
  switch (spec.kind) {
    case 'cascade':
      return renderCascade(spec, table)
    case 'norm-growth':
      return renderNormGrowth(spec, table)
    case 'scaling':
      return renderScaling(spec, table)
  }
}
