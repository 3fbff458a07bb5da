import init, { Demo, closure } from "./pkg/prereqx_wasm.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

let demo;
let summary;

function heatmap(view) {
  const names = summary.concepts;
  let html = "<table class='heat'><tr><th></th>";
  for (const n of names) html += `<th class='col'>${n}</th>`;
  html += "</tr>";
  view.values.forEach((row, i) => {
    html += `<tr><th>${names[i]}</th>`;
    for (const v of row) {
      const on = v > view.theta;
      const shade = Math.round(255 - 200 * v);
      const bg = v > 0 ? `rgb(${shade},${shade},255)` : "#fff";
      html += `<td style="background:${bg};${on ? "outline:1px solid #000" : ""}" title="${v.toFixed(3)}">${v > 0 ? v.toFixed(1) : ""}</td>`;
    }
    html += "</tr>";
  });
  $("heat").innerHTML = html + "</table>";
}

// Nodes placed in columns by longest-path depth so edges run left to right.
function drawDag(view) {
  const ctx = $("dag").getContext("2d");
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  const n = summary.concepts.length;
  const depth = new Array(n).fill(0);
  const order = view.order.length ? view.order : [...Array(n).keys()];
  for (const v of order) {
    for (const [from, to] of view.edges) {
      if (from === v) depth[to] = Math.max(depth[to], depth[v] + 1);
    }
  }
  const cols = Math.max(...depth) + 1;
  const perCol = new Array(cols).fill(0);
  const pos = new Array(n);
  for (const v of order) {
    const c = depth[v];
    pos[v] = [40 + (c * (width - 120)) / Math.max(cols - 1, 1), 25 + perCol[c]++ * 32];
  }
  ctx.strokeStyle = "#888";
  for (const [from, to] of view.edges) {
    const [x1, y1] = pos[from];
    const [x2, y2] = pos[to];
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
    const a = Math.atan2(y2 - y1, x2 - x1);
    ctx.beginPath();
    ctx.moveTo(x2 - 6 * Math.cos(a), y2 - 6 * Math.sin(a));
    ctx.lineTo(x2 - 14 * Math.cos(a - 0.3), y2 - 14 * Math.sin(a - 0.3));
    ctx.lineTo(x2 - 14 * Math.cos(a + 0.3), y2 - 14 * Math.sin(a + 0.3));
    ctx.fill();
  }
  ctx.fillStyle = "#000";
  ctx.font = "11px system-ui";
  summary.concepts.forEach((name, i) => {
    const [x, y] = pos[i];
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillText(name, x + 6, y - 6);
  });
}

function refreshOmega() {
  const theta = Number($("theta").value);
  $("theta-val").textContent = theta.toFixed(2);
  const view = JSON.parse(demo.omega(theta, $("ordering").checked));
  heatmap(view);
  drawDag(view);
  $("topo").innerHTML = view.cycle
    ? `<span class="err">${view.cycle}</span>`
    : `${view.edges.length} edges; order: ${view.order.map((i) => summary.concepts[i]).join(" → ")}`;
}

function runClosure() {
  try {
    const out = JSON.parse(closure($("cl-matrix").value, $("cl-mode").value, $("cl-ranks").value));
    const fmt = (m) => m.map((r) => r.map((v) => v.toFixed(2)).join("  ")).join("\n");
    let text = `closed:\n${fmt(out.closed)}\n\nadded: ${JSON.stringify(out.added)}`;
    if (out.ordered) text += `\n\nordered:\n${fmt(out.ordered)}`;
    $("cl-out").textContent = text;
  } catch (e) {
    $("cl-out").textContent = String(e);
  }
}

function drawCurves() {
  const ctx = $("pr").getContext("2d");
  const { width, height } = ctx.canvas;
  const pad = 35;
  const x = (r) => pad + r * (width - 2 * pad);
  const y = (p) => height - pad - p * (height - 2 * pad);
  ctx.strokeStyle = "#000";
  ctx.strokeRect(x(0), y(1), x(1) - x(0), y(0) - y(1));
  ctx.fillText("recall", width / 2, height - 8);
  ctx.fillText("precision", 2, pad - 10);
  let curves;
  try {
    curves = JSON.parse(demo.curves());
  } catch (e) {
    $("pr-legend").textContent = String(e);
    return;
  }
  const legend = [];
  curves.forEach((c, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.beginPath();
    c.points.forEach((pt, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, x(pt.recall), y(pt.precision)));
    ctx.stroke();
    legend.push(`${c.method.padEnd(22)} AUPRC ${c.auprc.toFixed(3)}  (${COLORS[k % COLORS.length]})`);
    if (c.sweep.length) {
      const best = c.sweep.reduce((a, b) => (b.f1 > a.f1 ? b : a));
      legend.push(`  best F1 ${best.f1.toFixed(3)} at θ=${best.theta.toFixed(2)}`);
    }
  });
  $("pr-legend").textContent = legend.join("\n");
}

async function main() {
  await init();
  demo = Demo.sample();
  summary = JSON.parse(demo.summary());
  $("status").textContent = `${summary.title}: ${summary.concepts.length} concepts, ${summary.sections} sections, ${summary.pairs} labeled pairs`;
  $("theta").addEventListener("input", refreshOmega);
  $("ordering").addEventListener("change", refreshOmega);
  $("cl-run").addEventListener("click", runClosure);
  refreshOmega();
  runClosure();
  drawCurves();
}

main().catch((e) => {
  $("status").innerHTML = `<span class="err">${e}</span>`;
});
