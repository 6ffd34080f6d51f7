/** Minimal SVG scene builder: linear/log scales, axes, lines, stacked areas.
 * No DOM, no dependencies: plots are assembled as strings. */

export interface Margin {
  top: number
  right: number
  bottom: number
  left: number
}

export type ScaleKind = 'linear' | 'log'

export class Scale {
  constructor(
    readonly kind: ScaleKind,
    readonly domain: [number, number],
    readonly range: [number, number]
  ) {
    if (kind === 'log' && (domain[0] <= 0 || domain[1] <= 0)) {
      throw new Error('log scale needs a positive domain')
    }
  }

  apply(v: number): number {
    const [d0, d1] = this.domain
    const [r0, r1] = this.range
    let t: number
    if (this.kind === 'log') {
      t = (Math.log(v) - Math.log(d0)) / (Math.log(d1) - Math.log(d0) || 1)
    } else {
      t = (v - d0) / (d1 - d0 || 1)
    }
    return r0 + t * (r1 - r0)
  }

  ticks(count = 5): number[] {
    const [d0, d1] = this.domain
    if (this.kind === 'log') {
      const lo = Math.ceil(Math.log10(d0))
      const hi = Math.floor(Math.log10(d1))
      const out: number[] = []
      for (let e = lo; e <= hi; e++) out.push(10 ** e)
      return out.length >= 2 ? out : [d0, d1]
    }
    const span = d1 - d0 || 1
    const step = 10 ** Math.floor(Math.log10(span / count))
    const mult = [1, 2, 5, 10].find((m) => span / (step * m) <= count) ?? 10
    const s = step * mult
    const out: number[] = []
    for (let v = Math.ceil(d0 / s) * s; v <= d1 + 1e-12 * span; v += s) out.push(v)
    return out
  }
}

const fmt = (v: number): string => {
  if (v === 0) return '0'
  const a = Math.abs(v)
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1)
  return String(Math.round(v * 1000) / 1000)
}

export class Figure {
  readonly parts: string[] = []
  readonly plot: { x0: number; x1: number; y0: number; y1: number }

  constructor(
    readonly width = 640,
    readonly height = 420,
    readonly margin: Margin = { top: 36, right: 20, bottom: 46, left: 64 }
  ) {
    this.plot = {
      x0: margin.left,
      x1: width - margin.right,
      y0: height - margin.bottom,
      y1: margin.top,
    }
  }

  xscale(kind: ScaleKind, lo: number, hi: number): Scale {
    return new Scale(kind, [lo, hi], [this.plot.x0, this.plot.x1])
  }

  yscale(kind: ScaleKind, lo: number, hi: number): Scale {
    return new Scale(kind, [lo, hi], [this.plot.y0, this.plot.y1])
  }

  axes(x: Scale, y: Scale, xlabel: string, ylabel: string): void {
    const p = this.plot
    this.parts.push(
      `<rect x="${p.x0}" y="${p.y1}" width="${p.x1 - p.x0}" height="${p.y0 - p.y1}" fill="none" stroke="#444"/>`
    )
    for (const t of x.ticks()) {
      const px = x.apply(t)
      this.parts.push(`<line x1="${px}" y1="${p.y0}" x2="${px}" y2="${p.y0 + 5}" stroke="#444"/>`)
      this.parts.push(
        `<text x="${px}" y="${p.y0 + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`
      )
    }
    for (const t of y.ticks()) {
      const py = y.apply(t)
      this.parts.push(`<line x1="${p.x0 - 5}" y1="${py}" x2="${p.x0}" y2="${py}" stroke="#444"/>`)
      this.parts.push(
        `<text x="${p.x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${fmt(t)}</text>`
      )
    }
    this.parts.push(
      `<text x="${(p.x0 + p.x1) / 2}" y="${this.height - 8}" text-anchor="middle" font-size="13">${xlabel}</text>`
    )
    this.parts.push(
      `<text x="16" y="${(p.y0 + p.y1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 16 ${(p.y0 + p.y1) / 2})">${ylabel}</text>`
    )
  }

  title(text: string): void {
    this.parts.push(
      `<text x="${(this.plot.x0 + this.plot.x1) / 2}" y="20" text-anchor="middle" font-size="14" font-weight="bold">${text}</text>`
    )
  }

  polyline(xs: number[], ys: number[], x: Scale, y: Scale, stroke: string, width = 1.5): void {
    const pts = xs.map((v, i) => `${x.apply(v).toFixed(2)},${y.apply(ys[i]).toFixed(2)}`)
    this.parts.push(
      `<polyline points="${pts.join(' ')}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`
    )
  }

  /** Filled band between lower and upper series (same x grid). */
  band(xs: number[], lower: number[], upper: number[], x: Scale, y: Scale, fill: string): void {
    const fwd = xs.map((v, i) => `${x.apply(v).toFixed(2)},${y.apply(upper[i]).toFixed(2)}`)
    const back = [...xs]
      .reverse()
      .map((v, j) => {
        const i = xs.length - 1 - j
        return `${x.apply(v).toFixed(2)},${y.apply(lower[i]).toFixed(2)}`
      })
    this.parts.push(
      `<polygon points="${[...fwd, ...back].join(' ')}" fill="${fill}" stroke="none" opacity="0.85"/>`
    )
  }

  dots(xs: number[], ys: number[], x: Scale, y: Scale, fill: string, r = 3.5): void {
    for (let i = 0; i < xs.length; i++) {
      this.parts.push(
        `<circle cx="${x.apply(xs[i]).toFixed(2)}" cy="${y.apply(ys[i]).toFixed(2)}" r="${r}" fill="${fill}"/>`
      )
    }
  }

  note(text: string, xFrac = 0.55, yFrac = 0.12): void {
    const px = this.plot.x0 + xFrac * (this.plot.x1 - this.plot.x0)
    const py = this.plot.y1 + yFrac * (this.plot.y0 - this.plot.y1)
    this.parts.push(`<text x="${px}" y="${py}" font-size="13">${text}</text>`)
  }

  legend(entries: Array<[string, string]>): void {
    let y = this.plot.y1 + 14
    for (const [label, color] of entries) {
      const x = this.plot.x1 - 150
      this.parts.push(`<rect x="${x}" y="${y - 9}" width="12" height="12" fill="${color}"/>`)
      this.parts.push(`<text x="${x + 18}" y="${y + 1}" font-size="11">${label}</text>`)
      y += 16
    }
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}">` +
      `<rect width="100%" height="100%" fill="white"/>` +
      this.parts.join('\n') +
      `</svg>\n`
    )
  }
}

export const PALETTE = [
  '#4477aa',
  '#ee6677',
  '#228833',
  '#ccbb44',
  '#66ccee',
  '#aa3377',
  '#bbbbbb',
]
