/** DOM rendering: apply a DashboardView to the static markup in index.html. */

import { DashboardView } from './viewmodel.js';

export interface Elements {
  status: HTMLElement;
  vehicleSelect: HTMLSelectElement;
  speedValue: HTMLElement;
  clampValue: HTMLElement;
  gaugeFill: HTMLElement;
  clampMarker: HTMLElement;
  modeBadge: HTMLElement;
  light: HTMLElement;
  governorChip: HTMLElement;
  alertBanner: HTMLElement;
  throttle: HTMLInputElement;
  throttleValue: HTMLElement;
  ambulanceToggle: HTMLButtonElement;
  roadStrip: HTMLElement;
  vehicleDot: HTMLElement;
  rejection: HTMLElement;
  disconnectedOverlay: HTMLElement;
}

export function grabElements(root: Document): Elements {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = root.getElementById(id);
    if (el === null) throw new Error(`missing element #${id}`);
    return el as T;
  };
  return {
    status: byId('status'),
    vehicleSelect: byId<HTMLSelectElement>('vehicle-select'),
    speedValue: byId('speed-value'),
    clampValue: byId('clamp-value'),
    gaugeFill: byId('gauge-fill'),
    clampMarker: byId('clamp-marker'),
    modeBadge: byId('mode-badge'),
    light: byId('light'),
    governorChip: byId('governor-chip'),
    alertBanner: byId('alert-banner'),
    throttle: byId<HTMLInputElement>('throttle'),
    throttleValue: byId('throttle-value'),
    ambulanceToggle: byId<HTMLButtonElement>('ambulance-toggle'),
    roadStrip: byId('road-strip'),
    vehicleDot: byId('vehicle-dot'),
    rejection: byId('rejection'),
    disconnectedOverlay: byId('disconnected-overlay'),
  };
}

export function renderVehicleOptions(els: Elements, view: DashboardView): void {
  if (els.vehicleSelect.options.length === view.vehicles.length) return;
  els.vehicleSelect.innerHTML = '';
  for (const vehicle of view.vehicles) {
    const option = document.createElement('option');
    option.value = vehicle.id;
    option.textContent = `${vehicle.id} (${vehicle.kind})`;
    els.vehicleSelect.appendChild(option);
  }
}

export function renderBoards(els: Elements, view: DashboardView): void {
  if (els.roadStrip.querySelectorAll('.board-marker').length === view.boards.length) {
    return;
  }
  for (const marker of Array.from(els.roadStrip.querySelectorAll('.board-marker'))) {
    marker.remove();
  }
  for (const board of view.boards) {
    const marker = document.createElement('div');
    marker.className = `board-marker mode-${board.mode}`;
    if (board.has_light) marker.classList.add('has-light');
    marker.style.left = `${(100 * board.position_m) / view.roadLength}%`;
    marker.title = `${board.id} (${board.mode})`;
    els.roadStrip.appendChild(marker);
  }
}

export function render(els: Elements, view: DashboardView): void {
  els.status.textContent = view.connection;
  els.status.className = `pill ${view.connection}`;
  els.disconnectedOverlay.hidden = view.connection !== 'disconnected';

  renderVehicleOptions(els, view);
  renderBoards(els, view);
  if (view.selectedId !== null && els.vehicleSelect.value !== view.selectedId) {
    els.vehicleSelect.value = view.selectedId;
  }

  const update = view.update;
  els.speedValue.textContent = update === null ? '--' : update.speed_mps.toFixed(1);
  els.clampValue.textContent = update === null ? '--' : update.clamp_mps.toFixed(1);
  els.gaugeFill.style.width = `${100 * view.speedFraction}%`;
  els.clampMarker.style.left = `${100 * view.clampFraction}%`;

  els.modeBadge.textContent = view.modeBadge;
  els.modeBadge.className = `badge mode-${update?.active_mode ?? 'none'}`;

  els.light.className = `light ${view.light}`;
  els.light.title = `nearest light: ${view.light}`;

  const governor = update?.governor ?? 'cruise';
  els.governorChip.textContent = governor.replace('_', ' ').toUpperCase();
  els.governorChip.className = `chip ${governor}`;

  els.alertBanner.hidden = !view.alertBannerVisible;
  els.throttle.classList.toggle('overridden', view.autoBrakeActive);

  els.ambulanceToggle.hidden = !view.ambulanceControlVisible;
  els.ambulanceToggle.textContent = view.emitterAssumedOn
    ? 'SIREN ON' : 'SIREN OFF';
  els.ambulanceToggle.classList.toggle('on', view.emitterAssumedOn);

  els.vehicleDot.style.left = `${100 * view.positionFraction}%`;

  els.rejection.textContent = view.lastRejection ?? '';
  els.rejection.hidden = view.lastRejection === null;
}

/** Buzzer tone, rendered with WebAudio; opt-in because of autoplay rules. */
export class AlertTone {
  private ctx: AudioContext | null = null;
  private osc: OscillatorNode | null = null;

  set(active: boolean): void {
    if (active && this.osc === null) {
      this.ctx = this.ctx ?? new AudioContext();
      this.osc = this.ctx.createOscillator();
      this.osc.type = 'square';
      this.osc.frequency.value = 880;
      const gain = this.ctx.createGain();
      gain.gain.value = 0.05;
      this.osc.connect(gain).connect(this.ctx.destination);
      this.osc.start();
    } else if (!active && this.osc !== null) {
      this.osc.stop();
      this.osc.disconnect();
      this.osc = null;
    }
  }
}
