import init, {
  sweep_panel,
  bell_panel,
  bell_scan_panel,
  tradeoff_panel,
} from "./pkg/eprb_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function setStatus(id, text, isError = false) {
  const el = $(id);
  el.textContent = text;
  el.classList.toggle("error", isError);
}

function parseResult(statusId, jsonText) {
  const result = JSON.parse(jsonText);
  if (result.error) {
    setStatus(statusId, result.error, true);
    return null;
  }
  return result;
}

function fmt(x, digits = 5) {
  return Number(x).toLocaleString("en-US", {
    maximumFractionDigits: digits,
    minimumFractionDigits: 0,
  });
}

function statsTable(stats) {
  const pct = (x) => (100 * x).toFixed(2) + "%";
  return `<table>
    <tr><th>t band center</th><th>max rel t dev</th><th>std rel t dev</th>
        <th>max |E − E_ref|</th><th>std |E − E_ref|</th><th>points</th></tr>
    <tr><td>${fmt(stats.mean_t, 4)}</td><td>${pct(stats.max_rel_dev_t)}</td>
        <td>${pct(stats.std_rel_dev_t)}</td><td>${pct(stats.max_abs_dev_e)}</td>
        <td>${pct(stats.std_abs_dev_e)}</td><td>${stats.sample_points}</td></tr>
  </table>`;
}

// -- sweep panel --------------------------------------------------------

let csvUrl = null;

function runSweep() {
  setStatus("sw-status", "computing…");
  // let the status paint before the synchronous wasm call
  requestAnimationFrame(() => requestAnimationFrame(() => {
    const t0 = performance.now();
    const out = sweep_panel(
      $("sw-theory").value,
      num("sw-exp"),
      $("sw-mode").value,
      $("sw-method").value,
      num("sw-theta"),
      num("sw-phi"),
      num("sw-pairs"),
      num("sw-seed"),
    );
    const result = parseResult("sw-status", out);
    if (!result) return;
    $("sw-figure").innerHTML = result.svg;
    $("sw-stats").innerHTML = statsTable(result.stats);
    if (csvUrl) URL.revokeObjectURL(csvUrl);
    csvUrl = URL.createObjectURL(new Blob([result.csv], { type: "text/csv" }));
    const link = $("sw-csv");
    link.href = csvUrl;
    link.hidden = false;
    setStatus("sw-status",
      `${result.points} points in ${(performance.now() - t0).toFixed(0)} ms`);
  }));
}

// -- bell panel ---------------------------------------------------------

function verdict(v) {
  return v
    ? '<span class="verdict violated">violated</span>'
    : '<span class="verdict obeyed">obeyed</span>';
}

function runBell() {
  setStatus("bl-status", "computing…");
  requestAnimationFrame(() => requestAnimationFrame(() => {
    const out = bell_panel(
      $("bl-theory").value,
      num("bl-exp"),
      $("bl-mode").value,
      $("bl-method").value,
      num("bl-a"), num("bl-b"), num("bl-c"),
      num("bl-pairs"),
      42,
    );
    const result = parseResult("bl-status", out);
    if (!result) return;
    const se = result.se_lhs !== undefined
      ? ` (se ${fmt(result.se_lhs)} / ${fmt(result.se_rhs)})`
      : "";
    $("bl-result").innerHTML =
      `<p>|E(a,b) − E(a,c)| = <b>${fmt(result.lhs)}</b> &nbsp;vs&nbsp; ` +
      `1 + E(b,c) = <b>${fmt(result.rhs)}</b>${se} → ${verdict(result.violated)}</p>`;
    setStatus("bl-status", "");
  }));
}

function runBellScan() {
  setStatus("bl-status", "scanning…");
  requestAnimationFrame(() => requestAnimationFrame(() => {
    const t0 = performance.now();
    const out = bell_scan_panel(
      $("bl-theory").value,
      num("bl-exp"),
      $("bl-mode").value,
      $("bl-method").value === "mc" ? "quad" : $("bl-method").value,
      num("bl-step"),
      num("bl-top"),
    );
    const result = parseResult("bl-status", out);
    if (!result) return;
    const rows = result.top.map((t) =>
      `<tr><td>${fmt(t.a_deg, 1)}</td><td>${fmt(t.b_deg, 1)}</td><td>${fmt(t.c_deg, 1)}</td>
       <td>${fmt(t.lhs)}</td><td>${fmt(t.rhs)}</td><td>${fmt(t.margin)}</td>
       <td>${verdict(t.violated)}</td></tr>`).join("");
    $("bl-result").innerHTML =
      `<p>${result.violations} of ${result.triples} triples violate the bound.</p>
       <table><tr><th>a°</th><th>b°</th><th>c°</th><th>lhs</th><th>rhs</th>
       <th>margin</th><th></th></tr>${rows}</table>`;
    setStatus("bl-status",
      `${result.triples} triples in ${(performance.now() - t0).toFixed(0)} ms`);
  }));
}

// -- tradeoff panel -----------------------------------------------------

function runTradeoff() {
  setStatus("tr-status", "scanning…");
  requestAnimationFrame(() => requestAnimationFrame(() => {
    const t0 = performance.now();
    const out = tradeoff_panel(num("tr-min"), num("tr-max"), num("tr-step"), num("tr-theta"));
    const result = parseResult("tr-status", out);
    if (!result) return;
    $("tr-figure").innerHTML = result.svg;
    const rows = result.rows.map((r) =>
      `<tr><td>${fmt(r.exponent, 4)}</td>
       <td>${(100 * r.max_abs_dev_e).toFixed(2)}%</td>
       <td>${(100 * r.max_rel_dev_t).toFixed(2)}%</td></tr>`).join("");
    $("tr-table").innerHTML =
      `<table><tr><th>p</th><th>max |E − cos|</th><th>max rel t dev</th></tr>${rows}</table>`;
    setStatus("tr-status",
      `${result.rows.length} exponents in ${(performance.now() - t0).toFixed(0)} ms`);
  }));
}

// -- wiring -------------------------------------------------------------

function toggleExponentInputs() {
  const dependsOnP = (theory) => theory === "pow" || theory === "custom";
  $("sw-exp").disabled = !dependsOnP($("sw-theory").value);
  $("bl-exp").disabled = !dependsOnP($("bl-theory").value);
}

await init();
$("sw-run").addEventListener("click", runSweep);
$("bl-run").addEventListener("click", runBell);
$("bl-scan").addEventListener("click", runBellScan);
$("tr-run").addEventListener("click", runTradeoff);
$("sw-theory").addEventListener("change", toggleExponentInputs);
$("bl-theory").addEventListener("change", toggleExponentInputs);
toggleExponentInputs();
runSweep();
