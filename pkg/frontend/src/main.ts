/**
 * Entry point: wires the level picker, the session socket, the input
 * sender, and the render loop together. All message handling happens in
 * the animation loop by draining the client's mailbox.
 */

import { Feedback, webAudioPlayer } from "./audio.js";
import { BrowserGamepad, InputStreamer, KeyFallback } from "./gamepad.js";
import { SessionClient } from "./net.js";
import { SYNTHETIC_GAMEPAD } from "./protocol.js";
import { paint, renderScene } from "./renderer.js";
import { applyMessage, initialView, summarize, ViewModel } from "./viewmodel.js";

const SEND_HZ = 30;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function loadLevelIds(): Promise<string[]> {
  const res = await fetch("/levels");
  const rows = (await res.json()) as { id: string }[];
  return rows.map((r) => r.id);
}

function start(): void {
  const canvas = el<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d")!;
  const picker = el<HTMLSelectElement>("level");
  const goButton = el<HTMLButtonElement>("go");
  const muteBox = el<HTMLInputElement>("mute");
  const status = el<HTMLElement>("status");

  let view: ViewModel = initialView();
  let client: SessionClient | null = null;
  let sender: number | null = null;
  const feedback = new Feedback(webAudioPlayer());
  const keys = new KeyFallback();
  const pad = new BrowserGamepad();

  window.addEventListener("keydown", (e) => keys.press(e.key));
  window.addEventListener("keyup", (e) => keys.release(e.key));
  muteBox.addEventListener("change", () => (feedback.muted = muteBox.checked));

  loadLevelIds().then((ids) => {
    picker.innerHTML = ids.map((i) => `<option>${i}</option>`).join("");
  });

  goButton.addEventListener("click", () => {
    client?.close();
    if (sender !== null) clearInterval(sender);
    view = initialView();
    client = new SessionClient();
    const proto = location.protocol === "https:" ? "wss" : "ws";
    client.connect(`${proto}://${location.host}/session`, {
      type: "hello",
      level_id: picker.value,
      device_descriptor: SYNTHETIC_GAMEPAD,
    });

    const t0 = performance.now();
    const streamer = new InputStreamer(SYNTHETIC_GAMEPAD,
                                       () => (performance.now() - t0) / 1000);
    sender = window.setInterval(() => {
      if (!client || client.closed || view.connection === "ended") return;
      const axes = pad.read() ?? keys.read();
      const sample = streamer.sample(axes[0], axes[1]);
      client.send({ type: "input", t: sample.t, axes: sample.axes });
    }, 1000 / SEND_HZ);
  });

  const loop = () => {
    if (client) {
      for (const msg of client.drain()) {
        const update = applyMessage(view, msg);
        view = update.view;
        feedback.handle(update.sounds);
      }
    }
    status.textContent =
      view.connection === "ended" && view.report
        ? summarize(view.report)
        : view.lastError ?? view.connection;
    paint(ctx, renderScene(view, canvas.width, canvas.height),
          canvas.width, canvas.height);
    requestAnimationFrame(loop);
  };
  requestAnimationFrame(loop);
}

start();
