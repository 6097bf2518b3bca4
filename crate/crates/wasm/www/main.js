import init, { sweep, localizedCurve, univariateAttack } from "./pkg/oibdp_wasm.js";

const $ = (id) => document.getElementById(id);
const PAD = 44;

function frame(canvas, xmin, xmax, ymin, ymax, xlabel, ylabel) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  const sx = (x) => PAD + ((x - xmin) / (xmax - xmin || 1)) * (w - 2 * PAD);
  const sy = (y) => h - PAD + ((ymin - y) / (ymax - ymin || 1)) * (h - 2 * PAD);
  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.beginPath();
  ctx.moveTo(PAD, PAD / 2);
  ctx.lineTo(PAD, h - PAD);
  ctx.lineTo(w - PAD / 2, h - PAD);
  ctx.stroke();
  for (let i = 0; i <= 4; i++) {
    const x = xmin + ((xmax - xmin) * i) / 4;
    const y = ymin + ((ymax - ymin) * i) / 4;
    ctx.fillText(+x.toPrecision(3), sx(x) - 8, h - PAD + 16);
    ctx.fillText(+y.toPrecision(3), 4, sy(y) + 4);
  }
  ctx.fillText(xlabel, w - PAD - 40, h - 8);
  ctx.fillText(ylabel, PAD + 6, PAD / 2 + 4);
  return { ctx, sx, sy };
}

function polyline(g, pts, color) {
  g.ctx.strokeStyle = color;
  g.ctx.lineWidth = 1.5;
  g.ctx.beginPath();
  let pen = false;
  for (const [x, y] of pts) {
    if (y === null) { pen = false; continue; }
    if (pen) g.ctx.lineTo(g.sx(x), g.sy(y)); else g.ctx.moveTo(g.sx(x), g.sy(y));
    pen = true;
  }
  g.ctx.stroke();
}

function vline(g, x, y0, y1, color, label) {
  g.ctx.strokeStyle = color;
  g.ctx.setLineDash([4, 4]);
  g.ctx.beginPath();
  g.ctx.moveTo(g.sx(x), g.sy(y0));
  g.ctx.lineTo(g.sx(x), g.sy(y1));
  g.ctx.stroke();
  g.ctx.setLineDash([]);
  g.ctx.fillStyle = color;
  g.ctx.fillText(label, g.sx(x) + 4, g.sy(y1) + 12);
}

function guarded(note, draw) {
  try {
    note.classList.remove("error");
    draw();
  } catch (e) {
    note.classList.add("error");
    note.textContent = String(e);
  }
}

function drawSweep() {
  const note = $("sweep-note");
  $("sweep-k-value").textContent = $("sweep-k").value;
  guarded(note, () => {
    const hi = Math.max(5, Math.min(5000, +$("sweep-hi").value));
    const pts = JSON.parse(sweep($("sweep-task").value, 4, hi, +$("sweep-p").value, +$("sweep-k").value));
    const g = frame($("sweep-chart"), 4, hi, 0, 1, "n", "m/n");
    polyline(g, pts.map((q) => [q.n, q.bdp]), "#1f5fbf");
    const found = pts.filter((q) => q.bdp !== null);
    if (found.length === 0) {
      note.textContent = "No finite number of outliers breaks the estimator for these settings.";
      return;
    }
    const min = found.reduce((a, b) => (b.bdp < a.bdp ? b : a));
    note.textContent = `Smallest breakdown point ${min.m_min}/${min.n} = ${min.bdp.toFixed(4)}; ` +
      `${pts.length - found.length} of ${pts.length} sample sizes cannot be broken.`;
  });
}

function drawCurve() {
  const note = $("curve-note");
  guarded(note, () => {
    const c = JSON.parse(localizedCurve($("curve-variant").value, +$("curve-p").value, 400));
    const g = frame($("curve-chart"), 0, 1, 0, 1, "K/n", "limit");
    polyline(g, c.points, "#1f5fbf");
    vline(g, c.d0, 0, 1, "#c0392b", "d0");
    if (c.d1 !== null) vline(g, c.d1, 0, 1, "#27ae60", "d1");
    note.textContent = `Break-even points: d0 = ${c.d0.toFixed(7)}` +
      (c.d1 !== null ? `, d1 = ${c.d1.toFixed(7)}` : ", no hand-over to the top-K regime inside (0, 1)");
  });
}

function drawAttack() {
  const note = $("attack-note");
  const n = +$("attack-n").value;
  const mInput = $("attack-m");
  mInput.max = String(n - 1);
  if (+mInput.value > n - 1) mInput.value = String(n - 1);
  $("attack-n-value").textContent = n;
  $("attack-m-value").textContent = mInput.value;
  guarded(note, () => {
    const v = JSON.parse(univariateAttack(n, +mInput.value, +$("attack-gap").value));
    const all = v.clean.concat(v.outliers);
    const xs = all.map((p) => p[0]), ys = all.map((p) => p[1]);
    const g = frame($("attack-chart"), Math.min(...xs) - 1, Math.max(...xs) + 1,
      Math.min(...ys) - 1, Math.max(...ys) + 1, "x", "y");
    const dot = (p, color) => {
      g.ctx.fillStyle = color;
      g.ctx.beginPath();
      g.ctx.arc(g.sx(p[0]), g.sy(p[1]), 4, 0, 2 * Math.PI);
      g.ctx.fill();
    };
    v.clean.forEach((p) => dot(p, "#1f5fbf"));
    v.outliers.forEach((p) => dot(p, "#c0392b"));
    note.textContent = `Fitted slope sign: ${v.clean_slope > 0 ? "+" : "-"} on clean data, ` +
      `${v.attacked_slope > 0 ? "+" : "-"} after the attack` +
      (v.broken ? " (ordering inverted). " : ". ") +
      `Minimal number of outliers for n = ${n}: ${v.m_min}.`;
  });
}

await init();
for (const id of ["sweep-task", "sweep-p", "sweep-hi", "sweep-k"]) $(id).addEventListener("input", drawSweep);
for (const id of ["curve-variant", "curve-p"]) $(id).addEventListener("input", drawCurve);
for (const id of ["attack-n", "attack-m", "attack-gap"]) $(id).addEventListener("input", drawAttack);
drawSweep();
drawCurve();
drawAttack();
