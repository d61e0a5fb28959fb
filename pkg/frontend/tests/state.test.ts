import { describe, expect, it } from "vitest";

import { Store, defaultState } from "../src/state.js";
import { fullViewConfig } from "./fixtures.js";

describe("store", () => {
  it("round-trips every view-config field through serialize/apply", () => {
    const original = new Store();
    original.slotCount = 360;
    original.applyViewConfig(fullViewConfig());
    const saved = original.toViewConfig("case-study");

    // simulate a page reload: a brand new store with default state
    const reloaded = new Store();
    reloaded.slotCount = 360;
    reloaded.applyViewConfig(JSON.parse(JSON.stringify(saved)));
    const restored = reloaded.toViewConfig("case-study");

    expect(restored.name).toBe(saved.name);
    expect(restored.current_slot).toBe(saved.current_slot);
    expect(restored.duration_slots).toBe(saved.duration_slots);
    expect(restored.curve_mode).toBe(saved.curve_mode);
    expect(restored.alpha).toBe(saved.alpha);
    expect(restored.species_filter).toEqual(saved.species_filter);
    expect(restored.selected_pair).toEqual(saved.selected_pair);
    expect(restored.focal_animal).toBe(saved.focal_animal);
    expect(Object.keys(restored)).toHaveLength(8);
  });

  it("notifies subscribers once per update with the changed keys", () => {
    const store = new Store();
    store.slotCount = 100;
    const calls: string[][] = [];
    store.subscribe((_, changed) => calls.push(changed as string[]));
    store.update({ current_slot: 5, alpha: 0.9 });
    expect(calls).toHaveLength(1);
    expect(calls[0].sort()).toEqual(["alpha", "current_slot"]);
  });

  it("ignores no-op updates", () => {
    const store = new Store();
    let notified = 0;
    store.subscribe(() => notified++);
    store.update({ alpha: defaultState().alpha });
    expect(notified).toBe(0);
  });

  it("focusing pauses playback; clicking the focal again dismisses", () => {
    const store = new Store();
    store.update({ playback: { playing: true, speed: 4 } });
    store.toggleFocal("lion-1");
    expect(store.get().focal_animal).toBe("lion-1");
    expect(store.get().playback.playing).toBe(false);
    store.toggleFocal("lion-1");
    expect(store.get().focal_animal).toBeNull();
  });

  it("clamps slots to the grid", () => {
    const store = new Store();
    store.slotCount = 50;
    store.setSlot(500);
    expect(store.get().current_slot).toBe(49);
    store.setSlot(-3);
    expect(store.get().current_slot).toBe(0);
  });
});
