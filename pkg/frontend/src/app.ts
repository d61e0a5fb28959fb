/** Application wiring: owns the store, the API client, the panels, the
 *  playback loop, and the save/restore of view configurations. The client
 *  displays API numbers only; it computes no relatedness of its own. */

import { ApiClient } from "./api.js";
import { ChordView } from "./chord.js";
import { MainView } from "./mainview.js";
import { PairChart } from "./pairchart.js";
import { UncertaintyStrip } from "./strip.js";
import { Timeline } from "./timeline.js";
import { Store } from "./state.js";
import type { AnimalInfo, CurveModeName, Meta, Trace } from "./types.js";

const CURVE_MODES: CurveModeName[] = [
  "none", "catmull-rom", "cardinal", "natural-cubic", "cubic-basis", "bundle",
];

export class App {
  readonly store = new Store();
  readonly api: ApiClient;
  private meta: Meta | null = null;
  private animals: AnimalInfo[] = [];
  private timeline!: Timeline;
  private mainView!: MainView;
  private pairChart!: PairChart;
  private chord!: ChordView;
  private strip!: UncertaintyStrip;
  private playTimer: number | null = null;

  constructor(private root: HTMLElement, apiBase = "") {
    this.api = new ApiClient(apiBase);
  }

  async boot(): Promise<void> {
    this.meta = await this.api.meta();
    this.animals = (await this.api.animals()).animals;
    this.store.slotCount = this.meta.grid.slot_count;
    this.buildLayout();
    this.buildControls();
    this.store.subscribe((_, changed) => this.onStateChange(changed));
    this.store.setSlot(Math.floor(this.meta.grid.slot_count / 2));
    await this.refreshStatic();
    this.refreshSnapshot();
    this.refreshMatrix();
  }

  private buildLayout(): void {
    this.root.innerHTML = "";
    const grid = document.createElement("div");
    grid.className = "layout";
    this.root.appendChild(grid);

    const make = (cls: string, title: string): HTMLElement => {
      const panel = document.createElement("section");
      panel.className = `panel ${cls}`;
      const heading = document.createElement("h2");
      heading.textContent = title;
      panel.appendChild(heading);
      const body = document.createElement("div");
      panel.appendChild(body);
      grid.appendChild(panel);
      return body;
    };

    this.timeline = new Timeline(make("p-timeline", "Timeline"), {
      onScrub: (slot) => this.store.setSlot(slot),
    });
    this.timeline.setGrid(this.meta!.grid);
    this.mainView = new MainView(make("p-main", "Arena"), {
      onEntityClick: (animal) => this.store.toggleFocal(animal),
    });
    this.mainView.setArena(this.meta!.arena);
    this.pairChart = new PairChart(make("p-pair", "Pairwise relatedness"), {
      onBrush: (range) => this.store.update({ brush: range }),
    });
    this.chord = new ChordView(make("p-chord", "Relatedness chord"));
    this.chord.setSpecies(this.animals);
    this.strip = new UncertaintyStrip(make("p-strip", "Data availability"), {
      onToggleAnimal: (animal) => this.store.toggleHidden(animal),
    });
    document.addEventListener("keydown", (ev) => {
      if ((ev.target as HTMLElement)?.tagName === "INPUT") return;
      if (this.timeline.handleKey(ev.key)) ev.preventDefault();
    });
  }

  private buildControls(): void {
    const panel = document.createElement("section");
    panel.className = "panel p-controls";
    const heading = document.createElement("h2");
    heading.textContent = "Controls";
    panel.appendChild(heading);
    this.root.querySelector(".layout")!.appendChild(panel);
    const state = this.store.get();

    const row = (label: string): HTMLDivElement => {
      const div = document.createElement("div");
      div.className = "control-row";
      const span = document.createElement("label");
      span.textContent = label;
      div.appendChild(span);
      panel.appendChild(div);
      return div;
    };

    const playRow = row("playback");
    const playBtn = document.createElement("button");
    playBtn.textContent = "play";
    playBtn.setAttribute("data-control", "play");
    playBtn.addEventListener("click", () => {
      const playing = !this.store.get().playback.playing;
      this.store.update({ playback: { ...this.store.get().playback, playing } });
    });
    playRow.appendChild(playBtn);

    const durRow = row("duration (slots)");
    const dur = document.createElement("input");
    dur.type = "number";
    dur.min = "1";
    dur.value = String(state.duration_slots);
    dur.setAttribute("data-control", "duration");
    dur.addEventListener("change", () => {
      this.store.update({ duration_slots: Math.max(1, Number(dur.value) || 1) });
    });
    durRow.appendChild(dur);

    const modeRow = row("curve mode");
    const mode = document.createElement("select");
    mode.setAttribute("data-control", "curve-mode");
    for (const name of CURVE_MODES) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      mode.appendChild(opt);
    }
    mode.value = state.curve_mode;
    mode.addEventListener("change", () => {
      this.store.update({ curve_mode: mode.value as CurveModeName });
    });
    modeRow.appendChild(mode);

    const alphaRow = row("alpha");
    const alpha = document.createElement("input");
    alpha.type = "range";
    alpha.min = "0";
    alpha.max = "1";
    alpha.step = "0.05";
    alpha.value = String(state.alpha);
    alpha.setAttribute("data-control", "alpha");
    alpha.addEventListener("change", () => {
      this.store.update({ alpha: Number(alpha.value) });
    });
    alphaRow.appendChild(alpha);

    const speciesRow = row("species filter");
    const names = [...new Set(this.animals.map((a) => a.species))].sort();
    for (const name of names) {
      const wrap = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = true;
      box.setAttribute("data-species", name);
      box.addEventListener("change", () => {
        const checked = [...speciesRow.querySelectorAll("input:checked")]
          .map((el) => el.getAttribute("data-species")!)
          .filter(Boolean);
        // empty filter means "all species"
        this.store.update({
          species_filter: checked.length === names.length ? [] : checked,
        });
      });
      wrap.appendChild(box);
      wrap.appendChild(document.createTextNode(name));
      speciesRow.appendChild(wrap);
    }

    const pairRow = row("selected pair");
    const selects: HTMLSelectElement[] = [];
    for (const which of ["i", "j"]) {
      const sel = document.createElement("select");
      sel.setAttribute("data-control", `pair-${which}`);
      const none = document.createElement("option");
      none.value = "";
      none.textContent = "(none)";
      sel.appendChild(none);
      for (const a of this.animals) {
        const opt = document.createElement("option");
        opt.value = a.id;
        opt.textContent = a.id;
        sel.appendChild(opt);
      }
      sel.addEventListener("change", () => {
        const [i, j] = selects.map((s) => s.value);
        this.store.update({
          selected_pair: i && j && i !== j ? [i, j].sort() as [string, string] : null,
        });
      });
      selects.push(sel);
      pairRow.appendChild(sel);
    }

    const viewRow = row("views");
    const nameInput = document.createElement("input");
    nameInput.type = "text";
    nameInput.placeholder = "view name";
    nameInput.setAttribute("data-control", "view-name");
    viewRow.appendChild(nameInput);
    const saveBtn = document.createElement("button");
    saveBtn.textContent = "save";
    saveBtn.setAttribute("data-control", "view-save");
    saveBtn.addEventListener("click", () => {
      if (nameInput.value) void this.saveView(nameInput.value);
    });
    viewRow.appendChild(saveBtn);
    const loadBtn = document.createElement("button");
    loadBtn.textContent = "load";
    loadBtn.setAttribute("data-control", "view-load");
    loadBtn.addEventListener("click", () => {
      if (nameInput.value) void this.restoreView(nameInput.value);
    });
    viewRow.appendChild(loadBtn);
  }

  async saveView(name: string): Promise<void> {
    await this.api.putView(this.store.toViewConfig(name));
  }

  async restoreView(name: string): Promise<void> {
    const config = await this.api.getView(name);
    this.store.applyViewConfig(config);
  }

  private onStateChange(changed: (keyof ReturnType<Store["get"]>)[]): void {
    const state = this.store.get();
    if (changed.includes("playback")) this.syncPlayback();
    if (changed.some((k) => ["current_slot", "duration_slots", "curve_mode",
                             "alpha", "species_filter", "hidden_animals"].includes(k))) {
      this.refreshSnapshot();
    }
    if (changed.some((k) => ["current_slot", "duration_slots", "species_filter"].includes(k))) {
      this.refreshMatrix();
    }
    if (changed.includes("selected_pair")) {
      this.refreshPairSeries();
      this.strip.setSelectedPair(state.selected_pair);
    }
    if (changed.includes("brush")) {
      this.pairChart.setBrush(state.brush);
    }
    if (changed.some((k) => ["focal_animal", "current_slot", "duration_slots"].includes(k))) {
      this.refreshOverlay();
    }
    if (changed.includes("hidden_animals")) {
      this.mainView.setHidden(state.hidden_animals);
      this.strip.setHidden(state.hidden_animals);
    }
    if (changed.includes("current_slot")) {
      this.timeline.setSlot(state.current_slot);
      this.pairChart.setCurrentSlot(state.current_slot, state.duration_slots);
    }
  }

  private syncPlayback(): void {
    const { playing, speed } = this.store.get().playback;
    if (playing && this.playTimer === null) {
      this.playTimer = window.setInterval(() => {
        const next = this.store.get().current_slot + 1;
        if (next >= this.store.slotCount) {
          this.store.update({ playback: { playing: false, speed } });
        } else {
          this.store.setSlot(next);
        }
      }, 1000 / Math.max(speed, 0.25));
    } else if (!playing && this.playTimer !== null) {
      window.clearInterval(this.playTimer);
      this.playTimer = null;
    }
  }

  private visibleAnimals(): AnimalInfo[] {
    const state = this.store.get();
    return this.animals.filter((a) =>
      (!state.species_filter.length || state.species_filter.includes(a.species))
      && !state.hidden_animals.includes(a.id));
  }

  private async refreshStatic(): Promise<void> {
    const rows = await this.api.uncertainty(240);
    this.strip.setData(rows);
  }

  private refreshSnapshot(): void {
    const state = this.store.get();
    void this.api.snapshot(state.current_slot, state.duration_slots).then(async (snap) => {
      const visible = new Set(this.visibleAnimals().map((a) => a.id));
      snap.entities = snap.entities.filter((e) => visible.has(e.animal));
      this.mainView.setSnapshot(snap);
      this.timeline.setSeason(snap.season);
      const traces: Trace[] = [];
      for (const entity of snap.entities) {
        if (entity.state === "unavailable") continue;
        traces.push(await this.api.trace(
          entity.animal, state.current_slot, state.duration_slots,
          state.curve_mode, state.alpha));
      }
      this.mainView.setTraces(traces);
      this.refreshOverlay();
    }).catch(() => undefined);
  }

  private refreshMatrix(): void {
    const state = this.store.get();
    const from = Math.max(0, state.current_slot - state.duration_slots + 1);
    void this.api.matrix(from, state.current_slot,
      state.species_filter.length ? state.species_filter : undefined)
      .then((matrix) => this.chord.setData(matrix))
      .catch(() => undefined);
  }

  private refreshPairSeries(): void {
    const state = this.store.get();
    if (!state.selected_pair) return;
    const [i, j] = state.selected_pair;
    void this.api.pairSeries(i, j, 0, this.store.slotCount - 1)
      .then((series) => {
        this.pairChart.setData(series);
        this.pairChart.setCurrentSlot(state.current_slot, state.duration_slots);
      })
      .catch(() => undefined);
  }

  private refreshOverlay(): void {
    const state = this.store.get();
    if (!state.focal_animal) {
      this.mainView.setOverlay(null);
      return;
    }
    void this.api.ig(state.focal_animal, state.current_slot, state.duration_slots)
      .then((summary) => this.mainView.setOverlay(summary))
      .catch(() => undefined);
  }
}

export function mount(root: HTMLElement, apiBase = ""): App {
  const app = new App(root, apiBase);
  void app.boot();
  return app;
}
