/** Console state: everything the dashboard renders, nothing simulated.
 *
 * Every displayed quantity comes from the most recent StateUpdate for the
 * selected vehicle (or from the hello geometry); the view model holds no
 * physics and emits commands only when the UI asks it to build one.
 */

import {
  BoardInfo,
  DriverCommand,
  HelloFrame,
  ServerFrame,
  StateUpdate,
  VehicleInfo,
  isHello,
  isRejected,
  isStateUpdate,
} from './protocol.js';

export type ConnectionStatus = 'connecting' | 'connected' | 'disconnected';

const MODE_BADGES: Record<string, string> = {
  speed_limit: 'SPEED LIMIT',
  humps: 'HUMPS',
  school_zone: 'SCHOOL ZONE',
  freeway: 'FREEWAY',
  none: 'NO ZONE',
};

export interface DashboardView {
  connection: ConnectionStatus;
  vehicles: VehicleInfo[];
  boards: BoardInfo[];
  roadLength: number;
  selectedId: string | null;
  selectedKind: 'car' | 'ambulance' | null;
  /** Latest update for the selected vehicle; null until one arrives. */
  update: StateUpdate | null;
  speedFraction: number;
  clampFraction: number;
  positionFraction: number;
  modeBadge: string;
  light: 'green' | 'red' | 'none';
  alertBannerVisible: boolean;
  autoBrakeActive: boolean;
  ambulanceControlVisible: boolean;
  emitterAssumedOn: boolean;
  lastRejection: string | null;
  audibleEnabled: boolean;
}

export class ConsoleViewModel {
  private connection: ConnectionStatus = 'connecting';
  private vehicles: VehicleInfo[] = [];
  private boards: BoardInfo[] = [];
  private roadLength = 1;
  private selectedId: string | null = null;
  private latest = new Map<string, StateUpdate>();
  private clientSeq = 0;
  private emitterAssumedOn = false;
  private lastRejection: string | null = null;
  audibleEnabled = false;

  onOpen(): void {
    this.connection = 'connected';
  }

  onClose(): void {
    this.connection = 'disconnected';
  }

  onFrame(frame: ServerFrame): void {
    if (isHello(frame)) {
      this.applyHello(frame);
    } else if (isRejected(frame)) {
      this.lastRejection = frame.reason;
    } else if (isStateUpdate(frame)) {
      this.latest.set(frame.vehicle_id, frame);
    }
  }

  private applyHello(hello: HelloFrame): void {
    this.vehicles = hello.vehicles;
    this.boards = hello.signboards;
    this.roadLength = hello.road_length_m > 0 ? hello.road_length_m : 1;
    if (this.selectedId === null && hello.vehicles.length > 0) {
      this.select(hello.vehicles[0].id);
    }
  }

  select(vehicleId: string): void {
    if (this.vehicles.some((v) => v.id === vehicleId)) {
      this.selectedId = vehicleId;
      this.emitterAssumedOn = false;
    }
  }

  /** Throttle command for the selected vehicle; null while not connected. */
  buildThrottle(value: number): DriverCommand | null {
    if (this.connection !== 'connected' || this.selectedId === null) return null;
    const clamped = Math.min(1, Math.max(0, value));
    return {
      type: 'throttle',
      vehicle_id: this.selectedId,
      value: clamped,
      client_seq: ++this.clientSeq,
    };
  }

  /** Siren/emitter toggle; only meaningful for an ambulance. */
  buildAmbulanceToggle(): DriverCommand | null {
    if (this.connection !== 'connected' || this.selectedId === null) return null;
    const vehicle = this.vehicles.find((v) => v.id === this.selectedId);
    if (vehicle === undefined || vehicle.kind !== 'ambulance') return null;
    this.emitterAssumedOn = !this.emitterAssumedOn;
    return {
      type: 'ambulance_toggle',
      vehicle_id: this.selectedId,
      client_seq: ++this.clientSeq,
    };
  }

  view(): DashboardView {
    const selected = this.selectedId === null
      ? undefined
      : this.vehicles.find((v) => v.id === this.selectedId);
    const update = this.selectedId === null
      ? null
      : this.latest.get(this.selectedId) ?? null;
    const vMax = selected !== undefined && selected.v_max_mps > 0
      ? selected.v_max_mps : 1;
    return {
      connection: this.connection,
      vehicles: this.vehicles,
      boards: this.boards,
      roadLength: this.roadLength,
      selectedId: this.selectedId,
      selectedKind: selected?.kind ?? null,
      update,
      speedFraction: update === null ? 0 : Math.min(1, update.speed_mps / vMax),
      clampFraction: update === null ? 1 : Math.min(1, update.clamp_mps / vMax),
      positionFraction: update === null
        ? 0 : Math.min(1, Math.max(0, update.position_m / this.roadLength)),
      modeBadge: MODE_BADGES[update?.active_mode ?? 'none'] ?? 'NO ZONE',
      light: update?.nearest_light ?? 'none',
      alertBannerVisible: update?.buzzer ?? false,
      autoBrakeActive: update?.governor === 'auto_brake',
      ambulanceControlVisible: selected?.kind === 'ambulance',
      emitterAssumedOn: this.emitterAssumedOn,
      lastRejection: this.lastRejection,
      audibleEnabled: this.audibleEnabled,
    };
  }
}
