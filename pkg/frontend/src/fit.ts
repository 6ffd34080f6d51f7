export interface Fit {
  slope: number
  intercept: number
}

/** Ordinary least squares y = slope * x + intercept. */
export function leastSquares(xs: number[], ys: number[]): Fit {
  if (xs.length !== ys.length || xs.length < 2) {
    throw new Error('least-squares fit needs at least two paired samples')
  }
  const n = xs.length
  const mx = xs.reduce((a, b) => a + b, 0) / n
  const my = ys.reduce((a, b) => a + b, 0) / n
  let sxx = 0
  let sxy = 0
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - mx) * (xs[i] - mx)
    sxy += (xs[i] - mx) * (ys[i] - my)
  }
  if (sxx === 0) {
    throw new Error('degenerate fit: all x values coincide')
  }
  const slope = sxy / sxx
  return { slope, intercept: my - slope * mx }
}

/** Slope of log(y) against log(x); both sides must be positive. */
export function logLogFit(xs: number[], ys: number[]): Fit {
  if (xs.some((v) => v <= 0) || ys.some((v) => v <= 0)) {
    throw new Error('log-log fit needs strictly positive data')
  }
  return leastSquares(xs.map(Math.log), ys.map(Math.log))
}
