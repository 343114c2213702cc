import init, { envelope_curves, refinement_trace, sample_histogram } from "./pkg/vws_wasm.js";

const PAD = { l: 52, r: 12, t: 12, b: 30 };

function frame(canvas, xs, ys) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const finite = (v) => Number.isFinite(v);
  const fx = xs.filter(finite), fy = ys.filter(finite);
  let [x0, x1] = [Math.min(...fx), Math.max(...fx)];
  let [y0, y1] = [Math.min(...fy), Math.max(...fy)];
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) { y0 -= 0.5; y1 += 0.5; }
  const w = canvas.width - PAD.l - PAD.r, h = canvas.height - PAD.t - PAD.b;
  const sx = (x) => PAD.l + ((x - x0) / (x1 - x0)) * w;
  const sy = (y) => PAD.t + h - ((y - y0) / (y1 - y0)) * h;
  ctx.strokeStyle = "#444";
  ctx.strokeRect(PAD.l, PAD.t, w, h);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  for (let i = 0; i <= 4; i++) {
    const x = x0 + ((x1 - x0) * i) / 4, y = y0 + ((y1 - y0) * i) / 4;
    ctx.textAlign = "center";
    ctx.fillText(x.toPrecision(3), sx(x), PAD.t + h + 14);
    ctx.textAlign = "right";
    ctx.fillText(y.toPrecision(3), PAD.l - 4, sy(y) + 4);
  }
  return { ctx, sx, sy, y0 };
}

function line(f, xs, ys, color, dash = []) {
  const { ctx, sx, sy } = f;
  ctx.strokeStyle = color;
  ctx.setLineDash(dash);
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  let started = false;
  xs.forEach((x, i) => {
    if (!Number.isFinite(ys[i])) { started = false; return; }
    if (started) ctx.lineTo(sx(x), sy(ys[i])); else ctx.moveTo(sx(x), sy(ys[i]));
    started = true;
  });
  ctx.stroke();
  ctx.setLineDash([]);
}

function params() {
  const num = (id) => Number(document.getElementById(id).value);
  return {
    d: num("d"), kappa: num("kappa"), regions: num("regions"), draws: num("draws"), seed: num("seed"),
    linear: document.getElementById("scheme").value === "linear",
  };
}

function drawEnvelope(p) {
  const c = envelope_curves(p.d, p.kappa, p.regions, p.linear, 600);
  const x = Array.from(c.x), t = Array.from(c.target), u = Array.from(c.upper), l = Array.from(c.lower);
  const cap = Math.max(...t) * 3;
  const clip = (v) => Math.min(v, cap);
  const f = frame(document.getElementById("envelope"), x, u.map(clip).concat(l, t));
  for (const k of c.knots) line(f, [k, k], [f.y0, cap], "#999", [4, 3]);
  line(f, x, u.map(clip), "#1f77b4");
  line(f, x, l, "#d62728");
  line(f, x, t, "#000");
  return c.bound;
}

function drawTrace(p) {
  const g = Array.from(refinement_trace(p.d, p.kappa, Math.max(p.regions, 2) * 4, p.linear, true, p.seed));
  const r = Array.from(refinement_trace(p.d, p.kappa, Math.max(p.regions, 2) * 4, p.linear, false, p.seed));
  const n = (v) => v.map((_, i) => i + 1);
  const f = frame(document.getElementById("trace"), n(g).concat(n(r)), g.concat(r));
  line(f, n(g), g, "#1f77b4");
  line(f, n(r), r, "#ff7f0e");
}

function drawHistogram(p) {
  const h = sample_histogram(p.d, p.kappa, p.regions, p.linear, p.draws, 40, p.seed);
  const e = Array.from(h.edges), o = Array.from(h.observed), x = Array.from(h.expected);
  const mids = o.map((_, i) => 0.5 * (e[i] + e[i + 1]));
  const f = frame(document.getElementById("hist"), e, o.concat(x, [0]));
  f.ctx.fillStyle = "rgba(31,119,180,0.45)";
  o.forEach((v, i) => {
    const left = f.sx(e[i]), right = f.sx(e[i + 1]);
    f.ctx.fillRect(left, f.sy(v), Math.max(right - left - 1, 1), f.sy(0) - f.sy(v));
  });
  line(f, mids, x, "#000");
  return h.rejection_fraction;
}

function run() {
  const status = document.getElementById("status");
  status.className = "";
  try {
    const p = params();
    const t0 = performance.now();
    const bound = drawEnvelope(p);
    drawTrace(p);
    const rej = drawHistogram(p);
    status.textContent =
      `exact rejection probability ${(100 * bound).toFixed(2)}%, observed ${(100 * rej).toFixed(2)}% ` +
      `(${(performance.now() - t0).toFixed(0)} ms)`;
  } catch (err) {
    status.className = "error";
    status.textContent = String(err.message ?? err);
  }
}

await init();
document.getElementById("run").addEventListener("click", run);
run();
