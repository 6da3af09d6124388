/**
 * Sound effects with a mute switch. Overlays are view state and never pass
 * through here, so muting silences the speaker and nothing else. Applause
 * latches: one celebration per session, even if completion is reported
 * through more than one channel.
 */

import type { Sound } from "./viewmodel.js";

export class Feedback {
  muted = false;
  private applausePlayed = false;

  constructor(private play: (sound: Sound) => void) {}

  /** Filter and dispatch this tick's sounds; returns what actually played. */
  handle(sounds: Sound[]): Sound[] {
    const played: Sound[] = [];
    for (const s of sounds) {
      if (s === "applause") {
        if (this.applausePlayed) continue;
        this.applausePlayed = true;   // latch even when muted: no replay later
      }
      if (!this.muted) {
        this.play(s);
        played.push(s);
      }
    }
    return played;
  }
}

/** Tiny synthesized effects so the client ships with zero audio assets. */
export function webAudioPlayer(): (sound: Sound) => void {
  let ctx: AudioContext | null = null;
  return (sound) => {
    ctx = ctx ?? new AudioContext();
    const t0 = ctx.currentTime;
    if (sound === "move") {
      const osc = ctx.createOscillator();
      const gain = ctx.createGain();
      osc.frequency.value = 440;
      osc.type = "triangle";
      gain.gain.setValueAtTime(0.18, t0);
      gain.gain.exponentialRampToValueAtTime(0.001, t0 + 0.25);
      osc.connect(gain).connect(ctx.destination);
      osc.start(t0);
      osc.stop(t0 + 0.25);
    } else {
      // applause: a second of shaped white noise
      const len = ctx.sampleRate;
      const buf = ctx.createBuffer(1, len, ctx.sampleRate);
      const data = buf.getChannelData(0);
      for (let i = 0; i < len; i++) {
        const env = Math.min(1, i / 2000) * (1 - i / len);
        data[i] = (Math.random() * 2 - 1) * env * 0.5;
      }
      const src = ctx.createBufferSource();
      src.buffer = buf;
      src.connect(ctx.destination);
      src.start(t0);
    }
  };
}
