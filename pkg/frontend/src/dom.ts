/** Thin DOM bindings: print the screen model, wire the control surface. */

import { KILL_HOLD_MS } from "./controls.js";
import { FLIGHT_MODES, THROTTLE_DETENTS } from "./messages.js";
import { ConsoleSession } from "./session.js";
import { renderScreen, renderTelemetry } from "./view.js";

export function mountConsole(session: ConsoleSession, root: HTMLElement): void {
  root.innerHTML = `
    <div id="alerts"></div>
    <div id="screen"></div>
    <div id="telemetry"></div>
    <div id="surface">
      <div id="modes"></div>
      <div id="throttle"></div>
      <button id="kill">KILL (hold ${KILL_HOLD_MS} ms)</button>
      <button id="download">download transcript</button>
    </div>
  `;
  const screenEl = root.querySelector<HTMLElement>("#screen")!;
  const telemetryEl = root.querySelector<HTMLElement>("#telemetry")!;
  const alertsEl = root.querySelector<HTMLElement>("#alerts")!;

  const modesEl = root.querySelector<HTMLElement>("#modes")!;
  for (const mode of FLIGHT_MODES) {
    const button = document.createElement("button");
    button.textContent = mode;
    button.onclick = () => session.tapMode(mode);
    modesEl.appendChild(button);
  }
  const throttleEl = root.querySelector<HTMLElement>("#throttle")!;
  for (const detent of THROTTLE_DETENTS) {
    const button = document.createElement("button");
    button.textContent = detent;
    button.onclick = () => session.dragThrottle(detent);
    throttleEl.appendChild(button);
  }
  const killButton = root.querySelector<HTMLButtonElement>("#kill")!;
  killButton.onmousedown = () => session.killPress();
  killButton.onmouseup = () => session.killRelease();
  root.querySelector<HTMLButtonElement>("#download")!.onclick = () => {
    const blob = new Blob([session.downloadTranscript()], { type: "application/jsonl" });
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(blob);
    anchor.download = "session-transcript.jsonl";
    anchor.click();
  };

  const redraw = () => {
    const screen = renderScreen(session);
    const telemetry = renderTelemetry(session);
    screenEl.innerHTML = renderScreenHtml(screen, session);
    telemetryEl.innerHTML = `
      <span>alt ${telemetry.altitudeM?.toFixed(1) ?? "-"} m</span>
      <span>home ${telemetry.distanceHomeM?.toFixed(1) ?? "-"} m</span>
      <span>${telemetry.mode} / ${telemetry.lifecycle}</span>
      <span class="badge ${telemetry.fenceBadge}">fence</span>
      ${telemetry.staleBanner ? '<span class="stale">telemetry stale</span>' : ""}
      ${telemetry.altitudeWarning ? '<span class="warn">ALTITUDE</span>' : ""}
    `;
    alertsEl.innerHTML = session.alerts
      .slice(-4)
      .map((a) => `<div class="alert ${a.kind}">${a.text}</div>`)
      .join("");
  };
  session.onChange(redraw);
  setInterval(redraw, 500); // refresh staleness banner even without traffic
  redraw();
}

function renderScreenHtml(screen: ReturnType<typeof renderScreen>, session: ConsoleSession): string {
  switch (screen.screen) {
    case "connecting":
      return "<p>connecting…</p>";
    case "disconnected":
      return "<p>session closed</p>";
    case "precheck": {
      const roles = screen.roles
        .map((role) => {
          const tasks = role.observeOnly
            ? "<li>no actions assigned; observe only</li>"
            : role.tasks.map((t) => `<li>${t}</li>`).join("");
          const ack = role.acked
            ? "acknowledged"
            : `<button onclick="window.__session.proceed('${role.role}')">proceed as ${role.role}</button>`;
          return `<section><h3>${role.role} (${role.device})</h3><ul>${tasks}</ul>${ack}</section>`;
        })
        .join("");
      void session;
      return `<h2>${screen.testId}: ${screen.mission} (wind ${screen.wind})</h2>
              <p>${screen.safetyNotes}</p>${roles}`;
    }
    case "plan":
      return `<h2>PLAN: ${screen.role}</h2><p>${screen.task}</p><p>${screen.note}</p>`;
    case "go":
      return `<h2 class="go">GO: ${screen.role}</h2><p>${screen.task} (now)</p>`;
    case "observe":
      return screen.doneWithTasks
        ? "<p>no more test actions; keep observing</p>"
        : "<p>mission running</p>";
    case "awareness":
      return `<h2>${screen.text}</h2>
              <input id="answer" /><button onclick="window.__session.answer('${screen.questionId}', (document.getElementById('answer')).value)">submit</button>`;
    case "results":
      return (
        "<h2>results</h2><ul>" +
        screen.outcomes.map((o) => `<li>${o.testId}: ${o.outcome}</li>`).join("") +
        "</ul>"
      );
  }
}
