/**
 * Browser bootstrap: wires the controller to the page.
 *
 * Configuration comes from query parameters: ?base=<service url> and
 * optionally &token=<static token>. Defaults to same-origin, which is
 * what `arsg serve --ui-dir` provides.
 */

import { AnnotationApp, type ReduceForm } from "./app.js";
import { ApiError, SessionClient } from "./client.js";
import { renderState } from "./render.js";
import type { Role } from "./types.js";

function readForm(): ReduceForm {
  const value = (id: string) =>
    (document.getElementById(id) as HTMLInputElement | HTMLSelectElement).value;
  const happyRaw = value("form-happy").trim();
  return {
    head: value("form-head"),
    leftRole: value("form-left") as Role | "",
    rightRole: value("form-right") as Role | "",
    rre: value("form-rre"),
    happy: happyRaw === "" ? undefined : Number(happyRaw),
  };
}

async function guarded(action: () => Promise<unknown>): Promise<void> {
  try {
    await action();
  } catch (err) {
    // ApiError is already in the view via the controller; anything else
    // (network down, bad URL) becomes the retry banner.
    if (!(err instanceof ApiError)) {
      const banner = document.getElementById("offline-banner");
      if (banner) banner.hidden = false;
    }
  }
}

function start(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("base") ?? "";
  const token = params.get("token") ?? undefined;
  const app = new AnnotationApp(new SessionClient(base, token));
  const root = document.getElementById("session-view") as HTMLElement;

  app.subscribe((view, error) => {
    const banner = document.getElementById("offline-banner");
    if (banner) banner.hidden = true;
    root.innerHTML = renderState(view, error, app.lastFormProblems);
    document.getElementById("act-shift")?.addEventListener("click", () =>
      guarded(() => app.shift()),
    );
    document.getElementById("act-reduce")?.addEventListener("click", () =>
      guarded(() => app.reduce(readForm())),
    );
    document.getElementById("act-undo")?.addEventListener("click", () =>
      guarded(() => app.undo()),
    );
    document.getElementById("act-finalize")?.addEventListener("click", () =>
      guarded(() => app.finalize()),
    );
    document.getElementById("act-export")?.addEventListener("click", () =>
      guarded(async () => {
        const text = await app.exportLogText();
        const blob = new Blob([text], { type: "application/json" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = `${app.state?.text_id ?? "session"}.log.json`;
        link.click();
        URL.revokeObjectURL(link.href);
      }),
    );
  });

  const openButton = document.getElementById("open-session") as HTMLButtonElement;
  openButton.addEventListener("click", () => {
    const textArea = document.getElementById("text-input") as HTMLTextAreaElement;
    const textId = (document.getElementById("text-id") as HTMLInputElement).value;
    const lines = textArea.value.split("\n").filter((line) => line.trim() !== "");
    guarded(() => app.open({ lines, text_id: textId || undefined }));
  });
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
