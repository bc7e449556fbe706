// Page logic for the fpmine demo. The wasm module does all the math; this
// file only gathers parameters, parses JSON, and draws tables and charts.
//
// Build the wasm package first:
//   wasm-pack build crates/fpmine-wasm --target web --out-dir ../../www/pkg
// then serve this directory (e.g. `python3 -m http.server -d www`).

import init, { mine_demo, noise_demo, curve_demo } from './pkg/fpmine_wasm.js';

const $ = (id) => document.getElementById(id);

const COLORS = {
  apriori: '#9e9e9e',
  fpgrowth: '#ffb74d',
  dt: '#81c784',
  rf: '#ba68c8',
  svm: '#4fc3f7',
  support: '#81c784',
  confidence: '#4fc3f7',
  lift: '#ffb74d',
  f1: '#ef5350',
};

function sourceParams() {
  if ($('source-kind').value === 'fimi') {
    return { kind: 'fimi', text: $('fimi-text').value };
  }
  return {
    kind: 'synthetic',
    n_transactions: +$('gen-tx').value,
    n_items: +$('gen-items').value,
    n_seed_patterns: +$('gen-patterns').value,
    mean_transaction_len: +$('gen-len').value,
    pattern_injection_prob: +$('gen-inject').value,
    seed: +$('gen-seed').value,
  };
}

function fmt(x, digits = 3) {
  if (x === null || x === undefined) return '—';
  return Number(x).toFixed(digits);
}

function fillTable(tbody, rows) {
  tbody.innerHTML = '';
  for (const cells of rows) {
    const tr = document.createElement('tr');
    cells.forEach((c, i) => {
      const td = document.createElement('td');
      td.textContent = c;
      if (i > 0) td.className = 'num';
      tr.appendChild(td);
    });
    tbody.appendChild(tr);
  }
}

// ------------------------------------------------------------------ charts

function drawChart(canvas, series, { xLabel, xTicks }) {
  const ctx = canvas.getContext('2d');
  const W = canvas.width, H = canvas.height;
  const pad = { l: 46, r: 120, t: 14, b: 30 };
  ctx.clearRect(0, 0, W, H);

  let maxLen = 1, maxY = 0, minY = Infinity;
  for (const s of Object.values(series)) {
    maxLen = Math.max(maxLen, s.length);
    for (const v of s) {
      if (v === null || v === undefined) continue;
      maxY = Math.max(maxY, v);
      minY = Math.min(minY, v);
    }
  }
  if (!isFinite(minY)) { minY = 0; maxY = 1; }
  const span = Math.max(maxY - minY, 0.05);
  minY = Math.max(0, minY - span * 0.1);
  maxY = maxY + span * 0.1;

  const x = (i) => pad.l + (maxLen === 1 ? 0.5 : i / (maxLen - 1)) * (W - pad.l - pad.r);
  const y = (v) => pad.t + (1 - (v - minY) / (maxY - minY)) * (H - pad.t - pad.b);

  // axes + horizontal grid
  ctx.strokeStyle = '#2a313c';
  ctx.fillStyle = '#9aa4b0';
  ctx.font = '11px ui-monospace, monospace';
  ctx.lineWidth = 1;
  for (let g = 0; g <= 4; g++) {
    const v = minY + (g / 4) * (maxY - minY);
    ctx.beginPath();
    ctx.moveTo(pad.l, y(v));
    ctx.lineTo(W - pad.r, y(v));
    ctx.stroke();
    ctx.fillText(v.toFixed(2), 6, y(v) + 4);
  }
  const ticks = xTicks ?? Array.from({ length: maxLen }, (_, i) => i + 1);
  const step = Math.max(1, Math.ceil(ticks.length / 10));
  ticks.forEach((t, i) => {
    if (i % step !== 0 && i !== ticks.length - 1) return;
    ctx.fillText(String(t), x(i) - 8, H - 8);
  });
  if (xLabel) ctx.fillText(xLabel, W - pad.r + 8, H - 8);

  // series lines + legend
  let legendY = pad.t + 8;
  for (const [name, values] of Object.entries(series)) {
    ctx.strokeStyle = COLORS[name] ?? '#ffffff';
    ctx.lineWidth = 2;
    ctx.beginPath();
    let pen = false;
    values.forEach((v, i) => {
      if (v === null || v === undefined) { pen = false; return; }
      if (pen) ctx.lineTo(x(i), y(v)); else ctx.moveTo(x(i), y(v));
      pen = true;
    });
    ctx.stroke();
    ctx.fillStyle = COLORS[name] ?? '#ffffff';
    ctx.fillRect(W - pad.r + 8, legendY - 8, 10, 10);
    ctx.fillStyle = '#e6e8eb';
    ctx.fillText(name, W - pad.r + 24, legendY + 1);
    legendY += 18;
  }
}

// ------------------------------------------------------------------ panels

async function runMine() {
  const btn = $('mine-run');
  btn.disabled = true;
  try {
    const params = {
      source: sourceParams(),
      algo: $('mine-algo').value,
      minsup: +$('mine-minsup').value,
      minconf: +$('mine-minconf').value,
      seed: +$('mine-seed').value,
    };
    const out = JSON.parse(mine_demo(JSON.stringify(params)));
    const summary = $('mine-summary');
    if (out.error) {
      summary.innerHTML = `<span class="error">${out.error}</span>`;
      return;
    }
    let text =
      `${out.transactions} transactions, ${out.n_items} items — ` +
      `${out.n_itemsets} frequent itemsets, ${out.n_rules} rules`;
    if (out.aggregate) {
      text += `\naggregate (top-k means): support ${fmt(out.aggregate.support)}, ` +
        `confidence ${fmt(out.aggregate.confidence)}, lift ${fmt(out.aggregate.lift)}`;
    }
    if (out.classifier_report) {
      const r = out.classifier_report;
      text += `\nclassifier: precision ${fmt(r.precision)}, recall ${fmt(r.recall)}, ` +
        `f1 ${fmt(r.f1)} on ${r.n_heldout} held-out candidates; ` +
        `${r.n_candidates_scored} scored, ${r.n_pruned} pruned, ${r.n_verified} verified`;
    }
    summary.textContent = text;
    fillTable(
      $('itemset-table').querySelector('tbody'),
      out.itemsets.slice(0, 30).map((s) => [`{${s.items}}`, fmt(s.support)]),
    );
    fillTable(
      $('rule-table').querySelector('tbody'),
      out.rules.slice(0, 20).map((r) => [
        `{${r.antecedent}} → {${r.consequent}}`,
        fmt(r.support), fmt(r.confidence), fmt(r.lift),
      ]),
    );
  } finally {
    btn.disabled = false;
  }
}

async function runCurve() {
  const btn = $('curve-run');
  btn.disabled = true;
  $('curve-error').textContent = '';
  try {
    const params = {
      source: sourceParams(),
      minsup: +$('curve-minsup').value,
      minconf: 0.0,
      seed: +$('curve-seed').value,
      n_trees: +$('curve-trees').value,
      max_depth: +$('curve-depth').value,
    };
    const out = JSON.parse(curve_demo(JSON.stringify(params)));
    if (out.error) {
      $('curve-error').textContent = out.error;
      return;
    }
    drawChart($('curve-canvas'), out.groups, { xLabel: 'iter' });
  } finally {
    btn.disabled = false;
  }
}

async function runNoise() {
  const btn = $('noise-run');
  btn.disabled = true;
  $('noise-error').textContent = '';
  try {
    const params = {
      source: sourceParams(),
      minsup: +$('noise-minsup').value,
      minconf: 0.1,
      levels: [0.0, 0.05, 0.1, 0.2],
      n_seeds: +$('noise-seeds').value,
      seed: +$('noise-seed').value,
      cost: +$('noise-cost').value,
    };
    const out = JSON.parse(noise_demo(JSON.stringify(params)));
    if (out.error) {
      $('noise-error').textContent = out.error;
      return;
    }
    const series = { support: [], confidence: [], lift: [], f1: [] };
    const ticks = [];
    for (const row of out.levels) {
      ticks.push(row.level);
      series.support.push(row.support);
      series.confidence.push(row.confidence);
      series.lift.push(row.lift);
      series.f1.push(row.f1);
    }
    drawChart($('noise-canvas'), series, { xLabel: 'noise', xTicks: ticks });
  } finally {
    btn.disabled = false;
  }
}

function wireControls() {
  $('source-kind').addEventListener('change', () => {
    const fimi = $('source-kind').value === 'fimi';
    $('fimi-text').style.display = fimi ? 'block' : 'none';
    for (const id of ['gen-tx', 'gen-items', 'gen-len', 'gen-patterns', 'gen-inject', 'gen-seed']) {
      $(id).disabled = fimi;
    }
  });
  $('mine-minsup').addEventListener('input', () => {
    $('minsup-val').textContent = (+$('mine-minsup').value).toFixed(2);
  });
  $('mine-minconf').addEventListener('input', () => {
    $('minconf-val').textContent = (+$('mine-minconf').value).toFixed(2);
  });
  $('mine-run').addEventListener('click', runMine);
  $('curve-run').addEventListener('click', runCurve);
  $('noise-run').addEventListener('click', runNoise);
}

init().then(() => {
  wireControls();
  runMine();
});
