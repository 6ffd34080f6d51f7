import { readFileSync } from 'fs'

import { render } from './plots.js'

function main(argv: string[]): number {
  const [command, ...rest] = argv
  if (command !== 'render') {
    process.stderr.write('usage: render --spec <plot-spec.json>\n')
    return 2
  }
  const i = rest.indexOf('--spec')
  if (i < 0 || i + 1 >= rest.length) {
    process.stderr.write('render needs --spec <plot-spec.json>\n')
    return 2
  }
  try {
    const spec = JSON.parse(readFileSync(rest[i + 1], 'utf8'))
    const result = render(spec)
    process.stdout.write(JSON.stringify(result) + '\n')
    return 0
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : String(err)}\n`)
    return 2
  }
}

process.exit(main(process.argv.slice(2)))
