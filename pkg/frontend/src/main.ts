/** Wire-up: socket events feed the view model, user gestures emit commands. */

import { ConsoleViewModel } from './viewmodel.js';
import { ControlSocket, defaultSocketUrl } from './socket.js';
import { AlertTone, grabElements, render } from './ui.js';

function start(): void {
  const els = grabElements(document);
  const vm = new ConsoleViewModel();
  const tone = new AlertTone();

  const socket = new ControlSocket(defaultSocketUrl(window.location), {
    onOpen: () => vm.onOpen(),
    onClose: () => vm.onClose(),
    onFrame: (frame) => vm.onFrame(frame),
  });

  els.vehicleSelect.addEventListener('change', () => {
    vm.select(els.vehicleSelect.value);
  });

  els.throttle.addEventListener('input', () => {
    const value = Number(els.throttle.value);
    els.throttleValue.textContent = value.toFixed(2);
    const command = vm.buildThrottle(value);
    if (command !== null) socket.send(command);
  });

  els.ambulanceToggle.addEventListener('click', () => {
    const command = vm.buildAmbulanceToggle();
    if (command !== null) socket.send(command);
  });

  const audible = document.getElementById('audible') as HTMLInputElement;
  audible.addEventListener('change', () => {
    vm.audibleEnabled = audible.checked;
  });

  socket.connect();
  const repaint = () => {
    const view = vm.view();
    render(els, view);
    tone.set(view.audibleEnabled && view.alertBannerVisible);
    requestAnimationFrame(repaint);
  };
  requestAnimationFrame(repaint);
}

window.addEventListener('DOMContentLoaded', start);
